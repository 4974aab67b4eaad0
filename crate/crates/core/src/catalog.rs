//! Frozen example geometries.

use nalgebra::DMatrix;

use crate::error::{GeometryError, Result};
use crate::frame_algebra::{unit_vector, EpsilonOrientation, Form};
use crate::invariant_geometry::{cartan_form, LieFrameGeometry};
use crate::special_structures::{
    build_g2, build_spin7, build_su3, standard_quaternion_triple, AlmostComplexStructure, CayleyData, G2Data, G2Mode,
    HypercomplexTriple,
};

pub const NAMES: [&str; 9] = [
    "su2-biinvariant",
    "su2su2",
    "su2-plus-abelian3",
    "su3-hkt",
    "flat-r4-quaternion",
    "g2-standard",
    "g2-su2-product",
    "spin7-standard",
    "su3-fibration",
];

/// Special structures attached to a geometry.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Structures {
    pub complex: Option<AlmostComplexStructure>,
    pub hypercomplex: Option<HypercomplexTriple>,
    pub g2: Option<G2Data>,
    pub spin7: Option<CayleyData>,
    /// Check the SU(3) → SU(3)/U(2) fibration data.
    pub su3_fibration: bool,
}

impl Structures {
    pub fn is_empty(&self) -> bool {
        *self == Structures::default()
    }
}

#[derive(Debug, Clone)]
pub struct Example {
    pub name: String,
    pub description: String,
    pub geometry: LieFrameGeometry,
    pub orient: EpsilonOrientation,
    pub structures: Structures,
}

/// su(2) with `c^a_{bc} = s ε_{abc}` and torsion `H = k · c`.
///
/// `k = −1` is the sign for which the `+H` connection is flat.
pub fn su2(s: f64, k: f64) -> LieFrameGeometry {
    let g = LieFrameGeometry::from_brackets(
        "su2",
        3,
        &[(0, 1, 2, s), (1, 2, 0, s), (2, 0, 1, s)],
        Form::zero(3, 3),
    )
    .expect("su(2) brackets satisfy Jacobi");
    let h = cartan_form(&g, k).expect("su(2) structure constants are totally antisymmetric");
    g.with_torsion_form(h).unwrap()
}

/// su(2) ⊕ ℝ^m with torsion `k · c` on the su(2) block.
pub fn su2_direct_sum_abelian(m: usize, k: f64) -> LieFrameGeometry {
    su2(1.0, k).direct_sum(&LieFrameGeometry::abelian(m)).unwrap()
}

/// Right multiplication by the unit `q ∈ {i, j, k}` on ℍ with basis `1, i, j, k`.
fn quaternion_right(q: usize) -> DMatrix<f64> {
    // e_b e_q = s e_c
    let product = |b: usize| -> (usize, f64) {
        match (b, q) {
            (0, x) => (x, 1.0),
            (x, y) if x == y => (0, -1.0),
            (1, 2) => (3, 1.0),
            (2, 1) => (3, -1.0),
            (2, 3) => (1, 1.0),
            (3, 2) => (1, -1.0),
            (3, 1) => (2, 1.0),
            (1, 3) => (2, -1.0),
            _ => unreachable!(),
        }
    };
    let mut m = DMatrix::zeros(4, 4);
    for b in 0..4 {
        let (c, s) = product(b);
        m[(c, b)] = s;
    }
    m
}

/// Hypercomplex triple on `n` dimensions acting on each listed u(2) ≅ ℍ block,
/// given as frame slots of `(1, i, j, k)`.
fn u2_triple(n: usize, blocks: &[[usize; 4]]) -> HypercomplexTriple {
    let mats: Vec<DMatrix<f64>> = (1..4)
        .map(|q| {
            let r = quaternion_right(q);
            let mut j = DMatrix::zeros(n, n);
            for slots in blocks {
                for a in 0..4 {
                    for b in 0..4 {
                        j[(slots[a], slots[b])] = r[(a, b)];
                    }
                }
            }
            j
        })
        .collect();
    let i1 = AlmostComplexStructure::new(mats[0].clone(), 1e-14).unwrap();
    let i2 = AlmostComplexStructure::new(mats[1].clone(), 1e-14).unwrap();
    HypercomplexTriple::from_pair(i1, i2, 1e-14).unwrap()
}

/// Self-dual quaternionic 2-forms on the last four of seven directions.
pub fn g2_product_omegas() -> [Form; 3] {
    let b = |i: usize, j: usize| Form::basis(7, &[i, j]);
    [&b(3, 4) + &b(5, 6), &(-&b(3, 6)) - &b(4, 5), &(-&b(3, 5)) + &b(4, 6)]
}

pub fn example(name: &str) -> Result<Example> {
    let mut s = Structures::default();
    let (description, geometry, orient) = match name {
        "su2-biinvariant" => (
            "SU(2) with the bi-invariant metric and flat-sign Cartan torsion",
            su2(1.0, -1.0),
            EpsilonOrientation::positive(3),
        ),
        "su2su2" => {
            let g = su2(1.0, -1.0)
                .direct_sum(&su2(1.0, -1.0))
                .unwrap()
                .direct_sum(&LieFrameGeometry::abelian(2))
                .unwrap();
            s.hypercomplex = Some(u2_triple(8, &[[6, 0, 1, 2], [7, 3, 4, 5]]));
            (
                "SU(2) × SU(2) × ℝ² with an HKT structure built from two u(2) ≅ ℍ blocks",
                g,
                EpsilonOrientation::positive(8),
            )
        }
        "su2-plus-abelian3" => (
            "SU(2) × ℝ³ with Cartan torsion on the SU(2) factor",
            su2_direct_sum_abelian(3, -1.0),
            EpsilonOrientation::positive(6),
        ),
        "su3-hkt" | "su3-fibration" => {
            let b = build_su3();
            s.hypercomplex = Some(b.triple);
            s.su3_fibration = name == "su3-fibration";
            (
                if s.su3_fibration {
                    "SU(3) as a U(2)-bundle over its quaternionic quotient"
                } else {
                    "SU(3) with the flat-sign Cartan torsion and its HKT structure"
                },
                b.geometry,
                EpsilonOrientation::positive(8),
            )
        }
        "flat-r4-quaternion" => {
            s.hypercomplex = Some(standard_quaternion_triple());
            (
                "ℝ⁴ with the flat quaternionic triple",
                LieFrameGeometry::abelian(4),
                EpsilonOrientation::positive(4),
            )
        }
        "g2-standard" => {
            let o = EpsilonOrientation::positive(7);
            s.g2 = Some(build_g2(G2Mode::Standard, o)?);
            ("ℝ⁷ with the standard G2 form", LieFrameGeometry::abelian(7), o)
        }
        "g2-su2-product" => {
            let o = EpsilonOrientation::positive(7);
            let lambda = [unit_vector(7, 0), unit_vector(7, 1), unit_vector(7, 2)];
            s.g2 = Some(build_g2(
                G2Mode::Product {
                    lambda,
                    omegas: g2_product_omegas(),
                },
                o,
            )?);
            (
                "SU(2) × ℝ⁴ with the G2 form λ¹²³ + λ^r ∧ ω_r",
                su2_direct_sum_abelian(4, -1.0),
                o,
            )
        }
        "spin7-standard" => {
            let g2 = build_g2(G2Mode::Standard, EpsilonOrientation::positive(7))?;
            let c = build_spin7(&g2)?;
            let o = c.orient;
            s.spin7 = Some(c);
            ("ℝ⁸ with the Cayley form e⁰ ∧ φ + *φ", LieFrameGeometry::abelian(8), o)
        }
        other => {
            return Err(GeometryError::InvalidConfig(format!(
                "unknown example '{other}'; available: {}",
                NAMES.join(", ")
            )))
        }
    };
    Ok(Example {
        name: name.to_string(),
        description: description.to_string(),
        geometry: geometry.renamed(name),
        orient,
        structures: s,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special_structures::hkt_report;

    #[test]
    fn every_name_builds() {
        for n in NAMES {
            let e = example(n).unwrap();
            assert_eq!(e.name, n);
            assert_eq!(e.orient.dim, e.geometry.dim());
        }
        assert!(example("nope").is_err());
    }

    #[test]
    fn su2su2_is_hkt() {
        let e = example("su2su2").unwrap();
        let rep = hkt_report(&e.geometry, e.structures.hypercomplex.as_ref().unwrap(), &e.orient, 1e-10).unwrap();
        assert!(rep.passed(), "{}", rep.to_text());
    }

    #[test]
    fn wrong_torsion_sign_breaks_u2_hkt() {
        let g = su2(1.0, 1.0).direct_sum(&LieFrameGeometry::abelian(1)).unwrap();
        let t = u2_triple(4, &[[3, 0, 1, 2]]);
        let rep = hkt_report(&g, &t, &EpsilonOrientation::positive(4), 1e-10).unwrap();
        assert!(!rep.passed());
    }
}
