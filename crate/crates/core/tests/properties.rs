use proptest::prelude::*;
use sno::seq::{seq_add, seq_inner, Seq};
use sno::spectral::{
    analysis, differentiate, integrate, interpolate_to_grid, multiply, CoeffSeries, GridFunction, GridKind,
};
use sno::C64;

fn coeffs(max: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, 1..max)
}

proptest! {
    #[test]
    fn chebyshev_grid_roundtrip(v in prop::collection::vec(-1.0f64..1.0, 2..80)) {
        let g = GridFunction::from_real(GridKind::Chebyshev, &v).unwrap();
        let back = interpolate_to_grid(&analysis(&g, true).unwrap(), &[v.len()], &[GridKind::Chebyshev]).unwrap();
        prop_assert!(back.max_abs_diff(&g) < 1e-12);
    }

    #[test]
    fn uniform_grid_roundtrip(v in prop::collection::vec(-1.0f64..1.0, 1..80)) {
        let g = GridFunction::from_real(GridKind::Uniform, &v).unwrap();
        let back = interpolate_to_grid(&analysis(&g, true).unwrap(), &[v.len()], &[GridKind::Uniform]).unwrap();
        prop_assert!(back.max_abs_diff(&g) < 1e-12);
    }

    #[test]
    fn antiderivative_differentiates_back(c in coeffs(40)) {
        let f = CoeffSeries::chebyshev(&c);
        let d = differentiate(&integrate(&f).unwrap());
        let n = c.len();
        let err = (0..n).map(|i| (d.coeffs()[i] - f.coeffs()[i]).norm()).fold(0.0, f64::max);
        prop_assert!(err < 1e-12);
    }

    #[test]
    fn products_commute(a in coeffs(20), b in coeffs(20)) {
        let (fa, fb) = (CoeffSeries::chebyshev(&a), CoeffSeries::chebyshev(&b));
        let ab = multiply(&fa, &fb).unwrap();
        let ba = multiply(&fb, &fa).unwrap();
        prop_assert!(ab.max_abs_diff(&ba) < 1e-14);
    }

    #[test]
    fn sequence_sum_is_bilinear_under_inner_product(a in coeffs(10), b in coeffs(10), c in coeffs(10)) {
        let basis = sno::spectral::Basis::Fourier;
        let (sa, sb, sc) = (Seq::from_real(basis, &a), Seq::from_real(basis, &b), Seq::from_real(basis, &c));
        let n = a.len().max(b.len()).max(c.len());
        let (sa, sb, sc) = (sa.padded(n), sb.padded(n), sc.padded(n));
        let lhs = seq_inner(&sc, &seq_add(&sa, &sb).unwrap()).unwrap();
        let rhs: C64 = seq_inner(&sc, &sa).unwrap() + seq_inner(&sc, &sb).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-12);
        prop_assert_eq!(seq_add(&sa, &sb).unwrap(), seq_add(&sb, &sa).unwrap());
    }
}
