use binforms::area::{
    closed_form_area, compute_cf, quadrature_area_line, quadrature_area_line_scaled, quadrature_area_polar,
    DEFAULT_TOL,
};
use binforms::exact::Integer;
use binforms::forms::{build, build_in, build_rn, FormKind};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn methods_agree() {
    for kind in [FormKind::Rn, FormKind::In] {
        for n in 3..=12 {
            let f = build(kind, n).unwrap();
            let line = quadrature_area_line(&f, DEFAULT_TOL).unwrap().value;
            let polar = quadrature_area_polar(&f, DEFAULT_TOL).unwrap().value;
            let closed = closed_form_area(n).unwrap();
            assert!(rel(line, closed) <= 1e-6, "{kind}_{n} line {line} vs {closed}");
            assert!(rel(polar, closed) <= 1e-6, "{kind}_{n} polar {polar} vs {closed}");
            assert!(rel(line, polar) <= 1e-6);
        }
    }
}

#[test]
fn rotation_invariance_of_area() {
    for n in 3..=12 {
        let a = quadrature_area_line(&build_rn(n).unwrap(), DEFAULT_TOL).unwrap().value;
        let b = quadrature_area_line(&build_in(n).unwrap(), DEFAULT_TOL).unwrap().value;
        assert!(rel(a, b) <= 1e-6, "n={n}");
    }
}

#[test]
fn scaling_law() {
    for f in [build_rn(3).unwrap(), build_in(4).unwrap()] {
        let base = quadrature_area_line(&f, DEFAULT_TOL).unwrap().value;
        let d = f.degree() as f64;
        for c in [2i64, 3, 10] {
            let scaled = f.scaled(&Integer::from(c));
            let got = quadrature_area_line(&scaled, DEFAULT_TOL).unwrap().value;
            assert!(rel(got, (c as f64).powf(-2.0 / d) * base) <= 1e-6, "{f} c={c}");
        }
    }
}

#[test]
fn monic_product_normalization() {
    // F_n* = I_n / 2^(n-1)
    for n in 3..=10 {
        let scale = 2f64.powi(1 - n as i32);
        let got = quadrature_area_line_scaled(&build_in(n).unwrap(), scale, DEFAULT_TOL).unwrap().value;
        let nf = f64::from(n);
        let want = 4f64.powf(1.0 - 1.0 / nf) * closed_form_area(n).unwrap();
        assert!(rel(got, want) <= 1e-6, "n={n}: {got} vs {want}");
    }
}

#[test]
fn cf_consistency() {
    for kind in [FormKind::Rn, FormKind::In] {
        for n in 3..=12 {
            let r = compute_cf(kind, n, 1e-6).unwrap();
            assert!(rel(r.cf_computed, r.cf_closed) <= 1e-6);
        }
    }
}

#[test]
fn closed_form_decreasing() {
    let v: Vec<f64> = (3..=64).map(|n| closed_form_area(n).unwrap()).collect();
    assert!(v.windows(2).all(|w| w[0] > w[1]));
}
