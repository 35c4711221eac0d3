//! Exact verification of the restriction/extension adjunctions along an
//! inclusion `j: P ⊆ Q`: `j^* ⊣ j_*` for downward-closed `P` and
//! `j_! ⊣ j^*` for upward-closed `P`.

use std::collections::HashSet;

use serde::Serialize;

use super::functor::SheafFunctor;
use super::hom::{enumerate_homs, hom_space, span_rank, NatTrans, DEFAULT_HOM_CAP};
use super::kan::{extension_open_ext, pushforward_closed_ext, restrict, restrict_nat};
use super::value::ValueKind;
use super::SheafError;
use crate::poset::Inclusion;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// `j_! ⊣ j^*`.
    Left,
    /// `j^* ⊣ j_*`.
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdjunctionViolation {
    /// Name of the element where the failing component lives.
    pub element: String,
    pub check: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdjunctionReport {
    pub side: Side,
    pub triangle_identities: bool,
    /// Counit `j^* j_* -> id` (right side) or unit `id -> j^* j_!` (left side).
    pub fully_faithful_iso: bool,
    /// `|Hom|` in SET, `dim Hom` in VECT, on the side of the left adjoint.
    pub hom_left_adjoint_side: usize,
    pub hom_right_adjoint_side: usize,
    pub hom_bijection: bool,
    pub violation: Option<AdjunctionViolation>,
}

impl AdjunctionReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// `f` lives on the subposet, `g` on the ambient poset. For [`Side::Right`]
/// the bijection checked is `Hom(j^* g, f) ≅ Hom(g, j_* f)`, for
/// [`Side::Left`] it is `Hom(j_! f, g) ≅ Hom(f, j^* g)`.
pub fn verify_adjunction(
    inc: &Inclusion,
    side: Side,
    f: &SheafFunctor,
    g: &SheafFunctor,
) -> Result<AdjunctionReport, SheafError> {
    if f.base() != inc.sub() || g.base() != inc.ambient() || f.kind() != g.kind() {
        return Err(SheafError::BaseMismatch);
    }
    match side {
        Side::Right => verify_right(inc, f, g),
        Side::Left => verify_left(inc, f, g),
    }
}

fn first_non_identity(t: &NatTrans) -> Option<usize> {
    t.components().iter().position(|m| !m.is_identity())
}

fn verify_right(inc: &Inclusion, f: &SheafFunctor, g: &SheafFunctor) -> Result<AdjunctionReport, SheafError> {
    let sub = inc.sub();
    let amb = inc.ambient();
    let push_f = pushforward_closed_ext(f, inc)?;
    let jf = push_f.functor().clone();
    let rg = restrict(g, inc)?;
    let push_rg = pushforward_closed_ext(&rg, inc)?;
    let unit_g = push_rg.right_unit(g)?;
    let counit_f = push_f.right_counit();

    let mut violation = None;
    let mut note = |element: String, check: &str| {
        if violation.is_none() {
            violation = Some(AdjunctionViolation { element, check: check.to_string() });
        }
    };

    let pulled_jf = restrict(&jf, inc)?;
    let fully_faithful_iso = counit_f.is_natural(&pulled_jf, f) && counit_f.is_iso(f);
    if !fully_faithful_iso {
        let at = (0..sub.len()).find(|&p| !counit_f.component(p).is_iso(f.value(p))).unwrap_or(0);
        note(sub.name(at).to_string(), "counit is not an isomorphism");
    }
    if let Some((a, _)) = unit_g.naturality_failure(g, push_rg.functor()) {
        note(amb.name(a).to_string(), "unit is not natural");
    }

    // (j_* ε_F) ∘ η_{j_* F} = id
    let push_pulled = pushforward_closed_ext(&pulled_jf, inc)?;
    let eta_jf = push_pulled.right_unit(&jf)?;
    let j_eps = push_pulled.right_map(&push_f, &counit_f)?;
    let tri1 = j_eps.after(&eta_jf);
    if let Some(q) = first_non_identity(&tri1) {
        note(amb.name(q).to_string(), "triangle identity j_*ε ∘ ηj_* = id");
    }
    // ε_{j^* G} ∘ j^*(η_G) = id
    let eps_rg = push_rg.right_counit();
    let tri2 = eps_rg.after(&restrict_nat(&unit_g, inc));
    if let Some(p) = first_non_identity(&tri2) {
        note(sub.name(p).to_string(), "triangle identity εj^* ∘ j^*η = id");
    }
    let triangle_identities = tri1.is_identity() && tri2.is_identity();

    // φ: j^*G -> F  ↦  j_*(φ) ∘ η_G : G -> j_*F, and back via ψ ↦ ε_F ∘ j^*ψ
    let forward = |phi: &NatTrans| -> Result<NatTrans, SheafError> {
        Ok(push_rg.right_map(&push_f, phi)?.after(&unit_g))
    };
    let backward = |psi: &NatTrans| counit_f.after(&restrict_nat(psi, inc));
    let (left_count, right_count, bijection) = match f.kind() {
        ValueKind::Set => {
            let lhs = enumerate_homs(&rg, f, DEFAULT_HOM_CAP)?;
            let rhs = enumerate_homs(g, &jf, DEFAULT_HOM_CAP)?;
            let rhs_set: HashSet<&NatTrans> = rhs.iter().collect();
            let mut images = HashSet::new();
            let mut ok = true;
            for phi in &lhs {
                let psi = forward(phi)?;
                ok &= rhs_set.contains(&psi) && backward(&psi) == *phi;
                images.insert(psi);
            }
            ok &= images.len() == rhs.len();
            (lhs.len(), rhs.len(), ok)
        }
        ValueKind::Vect => {
            let lhs = hom_space(&rg, f)?;
            let rhs = hom_space(g, &jf)?;
            let images = lhs.iter().map(&forward).collect::<Result<Vec<_>, _>>()?;
            let ok = images.iter().all(|psi| psi.is_natural(g, &jf))
                && span_rank(&images) == lhs.len()
                && lhs.len() == rhs.len()
                && images.iter().zip(&lhs).all(|(psi, phi)| backward(psi) == *phi);
            (lhs.len(), rhs.len(), ok)
        }
    };
    if !bijection {
        note(String::new(), "Hom(j^*G, F) -> Hom(G, j_*F) is not a bijection");
    }
    Ok(AdjunctionReport {
        side: Side::Right,
        triangle_identities,
        fully_faithful_iso,
        hom_left_adjoint_side: left_count,
        hom_right_adjoint_side: right_count,
        hom_bijection: bijection,
        violation,
    })
}

fn verify_left(inc: &Inclusion, f: &SheafFunctor, g: &SheafFunctor) -> Result<AdjunctionReport, SheafError> {
    let sub = inc.sub();
    let amb = inc.ambient();
    let ext_f = extension_open_ext(f, inc)?;
    let jf = ext_f.functor().clone();
    let rg = restrict(g, inc)?;
    let ext_rg = extension_open_ext(&rg, inc)?;
    let unit_f = ext_f.left_unit();
    let counit_g = ext_rg.left_counit(g)?;

    let mut violation = None;
    let mut note = |element: String, check: &str| {
        if violation.is_none() {
            violation = Some(AdjunctionViolation { element, check: check.to_string() });
        }
    };

    let pulled_jf = restrict(&jf, inc)?;
    let fully_faithful_iso = unit_f.is_natural(f, &pulled_jf) && unit_f.is_iso(&pulled_jf);
    if !fully_faithful_iso {
        let at = (0..sub.len()).find(|&p| !unit_f.component(p).is_iso(pulled_jf.value(p))).unwrap_or(0);
        note(sub.name(at).to_string(), "unit is not an isomorphism");
    }
    if let Some((a, _)) = counit_g.naturality_failure(ext_rg.functor(), g) {
        note(amb.name(a).to_string(), "counit is not natural");
    }

    // ε_{j_! F} ∘ j_!(η_F) = id
    let ext_pulled = extension_open_ext(&pulled_jf, inc)?;
    let eps_jf = ext_pulled.left_counit(&jf)?;
    let j_eta = ext_f.left_map(&ext_pulled, &unit_f)?;
    let tri1 = eps_jf.after(&j_eta);
    if let Some(q) = first_non_identity(&tri1) {
        note(amb.name(q).to_string(), "triangle identity εj_! ∘ j_!η = id");
    }
    // j^*(ε_G) ∘ η_{j^* G} = id
    let eta_rg = ext_rg.left_unit();
    let tri2 = restrict_nat(&counit_g, inc).after(&eta_rg);
    if let Some(p) = first_non_identity(&tri2) {
        note(sub.name(p).to_string(), "triangle identity j^*ε ∘ ηj^* = id");
    }
    let triangle_identities = tri1.is_identity() && tri2.is_identity();

    // ψ: j_!F -> G  ↦  j^*(ψ) ∘ η_F : F -> j^*G, and back via φ ↦ ε_G ∘ j_!φ
    let forward = |psi: &NatTrans| restrict_nat(psi, inc).after(&unit_f);
    let backward = |phi: &NatTrans| -> Result<NatTrans, SheafError> {
        Ok(counit_g.after(&ext_f.left_map(&ext_rg, phi)?))
    };
    let (left_count, right_count, bijection) = match f.kind() {
        ValueKind::Set => {
            let lhs = enumerate_homs(&jf, g, DEFAULT_HOM_CAP)?;
            let rhs = enumerate_homs(f, &rg, DEFAULT_HOM_CAP)?;
            let rhs_set: HashSet<&NatTrans> = rhs.iter().collect();
            let mut images = HashSet::new();
            let mut ok = true;
            for psi in &lhs {
                let phi = forward(psi);
                ok &= rhs_set.contains(&phi) && backward(&phi)? == *psi;
                images.insert(phi);
            }
            ok &= images.len() == rhs.len();
            (lhs.len(), rhs.len(), ok)
        }
        ValueKind::Vect => {
            let lhs = hom_space(&jf, g)?;
            let rhs = hom_space(f, &rg)?;
            let images: Vec<NatTrans> = lhs.iter().map(forward).collect();
            let mut ok = images.iter().all(|phi| phi.is_natural(f, &rg))
                && span_rank(&images) == lhs.len()
                && lhs.len() == rhs.len();
            for (phi, psi) in images.iter().zip(&lhs) {
                ok &= backward(phi)? == *psi;
            }
            (lhs.len(), rhs.len(), ok)
        }
    };
    if !bijection {
        note(String::new(), "Hom(j_!F, G) -> Hom(F, j^*G) is not a bijection");
    }
    Ok(AdjunctionReport {
        side: Side::Left,
        triangle_identities,
        fully_faithful_iso,
        hom_left_adjoint_side: left_count,
        hom_right_adjoint_side: right_count,
        hom_bijection: bijection,
        violation,
    })
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::poset::Poset;
    use crate::random;
    use crate::sheaf::fixtures::collapse;

    fn assert_clean(r: &AdjunctionReport) {
        assert!(r.passed(), "{r:?}");
        assert!(r.triangle_identities && r.fully_faithful_iso && r.hom_bijection);
        assert_eq!(r.hom_left_adjoint_side, r.hom_right_adjoint_side);
    }

    #[test]
    fn identity_inclusion() {
        let f = collapse();
        let id = Inclusion::identity(f.base());
        for side in [Side::Left, Side::Right] {
            let r = verify_adjunction(&id, side, &f, &f).unwrap();
            assert_clean(&r);
            assert_eq!(r.hom_left_adjoint_side, 4);
        }
    }

    #[test]
    fn point_below_a_chain() {
        let q = Poset::chain(2);
        let inc = Inclusion::of_subset(&q, &[0]);
        for seed in 0..40 {
            let mut rng = random::rng(seed);
            let f = random::random_functor(&mut rng, inc.sub(), ValueKind::Set, 3);
            let g = random::random_functor(&mut rng, &q, ValueKind::Set, 3);
            assert_clean(&verify_adjunction(&inc, Side::Right, &f, &g).unwrap());
        }
    }

    #[test]
    fn wrong_base_is_rejected() {
        let q = Poset::chain(2);
        let inc = Inclusion::of_subset(&q, &[0]);
        let f = collapse();
        assert!(matches!(verify_adjunction(&inc, Side::Right, &f, &f), Err(SheafError::BaseMismatch)));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn adjunctions_hold_on_random_instances(seed in any::<u64>(), vect in any::<bool>()) {
            let kind = if vect { ValueKind::Vect } else { ValueKind::Set };
            let mut rng = random::rng(seed);
            let q = random::random_poset(&mut rng, 4, 0.5);
            let down = random::random_down_set(&mut rng, &q, 0.4);
            let inc = Inclusion::of_subset(&q, &down);
            let f = random::random_functor(&mut rng, inc.sub(), kind, 2);
            let g = random::random_functor(&mut rng, &q, kind, 2);
            let r = verify_adjunction(&inc, Side::Right, &f, &g).unwrap();
            prop_assert!(r.passed(), "{:?}", r);
            prop_assert_eq!(r.hom_left_adjoint_side, r.hom_right_adjoint_side);

            let up = random::random_up_set(&mut rng, &q, 0.4);
            let inc = Inclusion::of_subset(&q, &up);
            let f = random::random_functor(&mut rng, inc.sub(), kind, 2);
            let r = verify_adjunction(&inc, Side::Left, &f, &g).unwrap();
            prop_assert!(r.passed(), "{:?}", r);
        }
    }
}
