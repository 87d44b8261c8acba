//! Free graded-commutative algebras over F_p, their homomorphisms and the
//! primary Steenrod operations.

mod element;
mod map;
mod parse;
mod presentation;
mod steenrod;

pub use element::AlgebraElement;
pub use map::AlgebraMap;
pub use parse::{parse_terms, ParsedTerm};
pub use presentation::{AlgebraPresentation, BasisTable, DegreeBasis, Generator, GeneratorKind, Monomial};
pub use steenrod::{SteenrodAction, SteenrodOp};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Fp;
    use std::sync::Arc;

    fn rank2(p: u32) -> Arc<AlgebraPresentation> {
        let g = |n: &str, d, k| Generator { name: n.into(), degree: d, kind: k };
        AlgebraPresentation::new(
            Fp::new(p).unwrap(),
            vec![
                g("x1", 1, GeneratorKind::Exterior),
                g("x2", 1, GeneratorKind::Exterior),
                g("u1", 2, GeneratorKind::Polynomial),
                g("u2", 2, GeneratorKind::Polynomial),
            ],
        )
        .unwrap()
    }

    fn el(a: &Arc<AlgebraPresentation>, s: &str) -> AlgebraElement {
        AlgebraElement::parse(a, s, None).unwrap()
    }

    #[test]
    fn mui_class_squares_to_zero() {
        let a = rank2(3);
        let g2 = el(&a, "x1*u2 - x2*u1");
        // (x1u2 - x2u1)^2 = x1u2x1u2 - x1u2x2u1 - x2u1x1u2 + x2u1x2u1
        //                 = 0 - x1x2u1u2 - x2x1u1u2 + 0 = -x1x2u1u2 + x1x2u1u2
        assert!(g2.multiply(&g2).unwrap().is_zero());
    }

    #[test]
    fn operations_on_mui_classes() {
        for p in [3, 5, 7] {
            let a = rank2(p);
            let st = SteenrodAction::standard(&a).unwrap();
            let g1 = el(&a, "x1*x2");
            let g2 = el(&a, "x1*u2 - x2*u1");
            let g3 = el(&a, &format!("x1*u2^{p} - x2*u1^{p}"));
            let g4 = el(&a, &format!("u1*u2^{p} - u2*u1^{p}"));
            assert_eq!(st.apply(SteenrodOp::Bockstein, &g1).unwrap(), g2.neg());
            assert_eq!(st.apply(SteenrodOp::Power, &g2).unwrap(), g3);
            assert_eq!(st.apply(SteenrodOp::Bockstein, &g3).unwrap(), g4);
        }
    }

    #[test]
    fn sq1_is_squaring_on_degree_one() {
        let f = Fp::new(2).unwrap();
        let a = AlgebraPresentation::new(
            f,
            vec![Generator { name: "x1".into(), degree: 1, kind: GeneratorKind::Polynomial }],
        )
        .unwrap();
        let st = SteenrodAction::standard(&a).unwrap();
        assert_eq!(st.apply(SteenrodOp::Bockstein, &el(&a, "x1")).unwrap(), el(&a, "x1^2"));
        // Sq1(x^2) = 2x^3 = 0
        assert!(st.apply(SteenrodOp::Bockstein, &el(&a, "x1^2")).unwrap().is_zero());
        assert!(st.apply(SteenrodOp::Power, &el(&a, "x1")).is_err());
    }

    #[test]
    fn render_round_trip() {
        let a = rank2(5);
        for s in ["x1*u2^3 - x2*u1^3", "2*u1^2 + u1*u2", "x1*x2", "1"] {
            let e = el(&a, s);
            assert_eq!(el(&a, &e.render()), e);
        }
        assert_eq!(el(&a, "x2*x1").render(), "-x1*x2");
    }

    #[test]
    fn maps_compose() {
        let a = rank2(3);
        let swap = AlgebraMap::from_strings(&a, &a, &["x2", "x1", "u2", "u1"]).unwrap();
        let twice = swap.compose(&swap).unwrap();
        let e = el(&a, "x1*u2^2 + x2*u1^2");
        assert_eq!(twice.apply(&e).unwrap(), e);
        assert_eq!(swap.apply(&el(&a, "x1*x2")).unwrap(), el(&a, "-x1*x2"));
        assert!(AlgebraMap::from_strings(&a, &a, &["u1", "x1", "u2", "u1"]).is_err());
    }
}
