//! Moment tables and condition checkers against an exact rational oracle.

use fvpg::weighting::{affine, design_cubic, perturbed_family, spline, GaussLegendre, WeightingFunction};
use proptest::prelude::*;

/// Minimal exact rational arithmetic for the oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Q(i128, i128);

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

impl Q {
    fn new(n: i128, d: i128) -> Self {
        let g = gcd(n, d).max(1);
        let s = if d < 0 { -1 } else { 1 };
        Q(s * n / g, s * d / g)
    }
    fn add(self, o: Q) -> Q {
        Q::new(self.0 * o.1 + o.0 * self.1, self.1 * o.1)
    }
    fn mul(self, o: Q) -> Q {
        Q::new(self.0 * o.0, self.1 * o.1)
    }
    fn to_f64(self) -> f64 {
        self.0 as f64 / self.1 as f64
    }
}

fn pmul(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut out = vec![Q(0, 1); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(x.mul(*y));
        }
    }
    out
}

fn integral(p: &[Q]) -> Q {
    p.iter().enumerate().fold(Q(0, 1), |acc, (k, c)| acc.add(c.mul(Q::new(1, k as i128 + 1))))
}

/// `p(1 - x)` via the binomial expansion.
fn reflect(p: &[Q]) -> Vec<Q> {
    let mut out = vec![Q(0, 1); p.len()];
    for (k, c) in p.iter().enumerate() {
        let mut binom: i128 = 1;
        for i in 0..=k {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            out[i] = out[i].add(c.mul(Q(sign * binom, 1)));
            binom = binom * (k - i) as i128 / (i as i128 + 1);
        }
    }
    out
}

fn deriv(p: &[Q]) -> Vec<Q> {
    if p.len() == 1 {
        return vec![Q(0, 1)];
    }
    p.iter().enumerate().skip(1).map(|(k, c)| c.mul(Q(k as i128, 1))).collect()
}

fn ints(c: &[i128]) -> Vec<Q> {
    c.iter().map(|&v| Q(v, 1)).collect()
}

/// Exact (s, c, sd, cd, m1, m_psi).
fn oracle(p: &[Q]) -> [Q; 6] {
    let d = deriv(p);
    [
        integral(&pmul(p, p)),
        integral(&pmul(p, &reflect(p))),
        integral(&pmul(&d, &d)),
        integral(&pmul(&d, &reflect(&d))),
        integral(&pmul(&[Q(0, 1), Q(1, 1)], p)),
        integral(p),
    ]
}

fn assert_moments(psi: &WeightingFunction, exact: [Q; 6], tol: f64) {
    let m = psi.default_moments();
    let got = [m.s, m.c, m.sd, m.cd, m.m1, m.m_psi];
    for (g, e) in got.iter().zip(exact) {
        assert!((g - e.to_f64()).abs() <= tol, "{}: {g} vs {:?}", psi.name(), e);
    }
}

#[test]
fn spline_moments_exact() {
    let exact = oracle(&ints(&[0, -9, 30, -20]));
    assert_eq!(exact, [Q(8, 7), Q(-9, 14), Q(21, 1), Q(21, 1), Q(1, 2), Q(1, 2)]);
    assert_moments(&spline(), exact, 1e-13);
    let k = spline().default_moments().stability_constants();
    assert!((k.delta - 0.5).abs() < 1e-13);
    assert!((k.delta_tilde - 8.0 / 7.0).abs() < 1e-13);
    assert!(k.epsilon.abs() < 1e-12);
    assert!((k.k - 4.0 / 3.0 * (1.0 + (96.0f64 / 7.0).sqrt())).abs() < 1e-12);
}

#[test]
fn perturbed_moments_exact() {
    // ψ_1 = spline + x(1-x)(1 - 5x + 5x²)
    let g = pmul(&pmul(&ints(&[0, 1]), &ints(&[1, -1])), &ints(&[1, -5, 5]));
    let p: Vec<Q> = (0..g.len())
        .map(|k| {
            let base = [0, -9, 30, -20].get(k).copied().unwrap_or(0);
            Q(base, 1).add(g[k])
        })
        .collect();
    let exact = oracle(&p);
    assert_eq!(exact[2], Q(148, 7));
    assert_eq!(exact[3], Q(146, 7));
    assert_moments(&perturbed_family(1.0), exact, 1e-12);
    let eps = perturbed_family(1.0).default_moments().stability_constants().epsilon;
    assert!((eps - 2.0 / 7.0).abs() < 1e-12);

    // orthogonality and compatibility survive the bump, checked by quadrature
    let rule = GaussLegendre::new(16).unwrap();
    let psi = perturbed_family(1.0);
    assert!(rule.integrate(|x| (1.0 - x) * psi.eval(x)).abs() < 1e-13);
    assert!((rule.integrate(|x| x * psi.eval(x)) - 0.5).abs() < 1e-13);
}

#[test]
fn gauss_legendre_integrates_spline_squared() {
    let rule = GaussLegendre::new(8).unwrap();
    let psi = spline();
    let got = rule.integrate(|x| psi.eval(x).powi(2));
    assert!((got - 8.0 / 7.0).abs() < 1e-13);
}

#[test]
fn cubic_design_conditions() {
    let d = design_cubic().unwrap();
    assert_eq!(d.alpha.round(), 10.0);
    assert_eq!(d.beta.round(), -20.0);
    let r = d.psi.conditions();
    assert!(r.localization && r.orthogonality && r.fv_compat && r.interp_compat);
}

#[test]
fn fv_compat_follows_from_orthogonality_and_interp_compat() {
    let families = [affine(), spline(), perturbed_family(0.5), perturbed_family(1.0), perturbed_family(-2.0)];
    for psi in families {
        let r = psi.conditions();
        if r.orthogonality && r.interp_compat {
            assert!(r.fv_compat, "{}", psi.name());
        }
        if r.localization {
            assert!(psi.default_moments().stability_constants().delta > 0.0, "{}", psi.name());
        }
        if r.interp_compat {
            assert!(psi.default_moments().stability_constants().epsilon.abs() <= 1e-12);
        }
    }
}

proptest! {
    #[test]
    fn moment_identities_for_random_polynomials(coeffs in prop::collection::vec(-20i32..20, 1..7)) {
        let exact_coeffs: Vec<Q> = coeffs.iter().map(|&c| Q(c as i128, 1)).collect();
        let psi = WeightingFunction::polynomial("random", coeffs.iter().map(|&c| c as f64).collect());
        let m = psi.default_moments();
        let exact = oracle(&exact_coeffs);
        let scale = coeffs.iter().map(|c| c.abs() as f64).sum::<f64>().max(1.0);
        for (g, e) in [m.s, m.c, m.sd, m.cd, m.m1, m.m_psi].iter().zip(exact) {
            prop_assert!((g - e.to_f64()).abs() <= 1e-12 * scale * scale);
        }
        prop_assert!((m.m_psi - (m.m0 + m.m1)).abs() <= 1e-12 * scale);
        // ∫ θ ψ(1 - θ) = m0
        let reflected = integral(&pmul(&[Q(0, 1), Q(1, 1)], &reflect(&exact_coeffs)));
        prop_assert!((m.m0 - reflected.to_f64()).abs() <= 1e-12 * scale);
        prop_assert!(m.s + 1e-12 * scale * scale >= m.c.abs());
        prop_assert!(m.sd + 1e-12 * scale * scale >= m.cd.abs());
    }

    #[test]
    fn localized_random_polynomials_have_positive_delta(
        inner in prop::collection::vec(-10i32..10, 0..4),
    ) {
        // ψ = x + x(1-x)·r(x) satisfies ψ(0) = 0, ψ(1) = 1 for any r.
        let bump = [0.0, 1.0, -1.0];
        let mut coeffs = vec![0.0, 1.0, 0.0, 0.0, 0.0, 0.0];
        for (k, &r) in inner.iter().enumerate() {
            for (i, b) in bump.iter().enumerate() {
                coeffs[k + i] += r as f64 * b;
            }
        }
        let psi = WeightingFunction::polynomial("localized", coeffs);
        prop_assert!(psi.check_localization());
        prop_assert!(psi.default_moments().stability_constants().delta > 0.0);
    }
}
