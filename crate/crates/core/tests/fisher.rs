use crbspec_core::fisher::*;
use proptest::prelude::*;

fn spectrum(values: &[f64]) -> ModalSpectrum {
    ModalSpectrum::from_values(values).unwrap()
}

fn dyadic(n: usize) -> Vec<f64> {
    (1..=n).map(|i| 2f64.powi(-(i as i32))).collect()
}

prop_compose! {
    fn paired_spectra(max: usize)(n in 1..max)
        (sigma in prop::collection::vec(1e-6f64..1e3, n), lambda in prop::collection::vec(1e-6f64..1e3, n))
        -> (Vec<f64>, Vec<f64>) {
        (sigma, lambda)
    }
}

proptest! {
    #[test]
    fn crb_is_strictly_increasing((s, l) in paired_spectra(40)) {
        let mu = fisher_eigenvalues(&spectrum(&s), &spectrum(&l), ScalarField::Complex).unwrap();
        let c = crb_curve(&mu, s.len()).unwrap();
        prop_assert!(c.monotone);
        prop_assert!(c.values().all(|v| v > 0.0));
    }

    #[test]
    fn noise_scaling((s, l) in paired_spectra(30), c in 1e-3f64..1e3) {
        let scaled: Vec<f64> = l.iter().map(|v| v * c).collect();
        let a = fisher_eigenvalues(&spectrum(&s), &spectrum(&l), ScalarField::Complex).unwrap();
        let b = fisher_eigenvalues(&spectrum(&s), &spectrum(&scaled), ScalarField::Complex).unwrap();
        for (x, y) in a.entries().iter().zip(b.entries()) {
            prop_assert!((y.value * c - x.value).abs() <= 1e-13 * x.value);
        }
        let ca = crb_curve(&a, s.len()).unwrap();
        let cb = crb_curve(&b, s.len()).unwrap();
        for (x, y) in ca.values().zip(cb.values()) {
            prop_assert!((y - c * x).abs() <= 1e-12 * y);
        }
    }

    #[test]
    fn real_field_doubles_fisher((s, l) in paired_spectra(30)) {
        let c = fisher_eigenvalues(&spectrum(&s), &spectrum(&l), ScalarField::Complex).unwrap();
        let r = fisher_eigenvalues(&spectrum(&s), &spectrum(&l), ScalarField::Real).unwrap();
        for (x, y) in c.entries().iter().zip(r.entries()) {
            prop_assert_eq!(y.value, 2.0 * x.value);
        }
    }

    #[test]
    fn identity_overlap_trace_is_diagonal_sum(
        (s, l) in paired_spectra(30),
        mult in prop::collection::vec(1u32..9, 30),
    ) {
        let mk = |v: &[f64]| ModalSpectrum::new(
            v.iter().zip(&mult).enumerate().map(|(i, (x, m))| Entry::new(Label::Index(i), *x, *m)).collect(),
            Ordering::ByLabel,
        ).unwrap();
        let (sig, lam) = (mk(&s), mk(&l));
        let t = fisher_trace(&sig, &lam, &OverlapMatrix::identity(s.len())).unwrap();
        let mut direct = 0.0;
        let mut comp = 0.0;
        for i in 0..s.len() {
            // independent Kahan accumulation
            let y = mult[i] as f64 * s[i] * s[i] / l[i] - comp;
            let t2 = direct + y;
            comp = (t2 - direct) - y;
            direct = t2;
        }
        prop_assert!((t.partial_sum() - direct).abs() <= 1e-14 * direct);
        let mu = fisher_eigenvalues(&sig, &lam, ScalarField::Complex).unwrap();
        let via_mu: f64 = mu.entries().iter().map(|e| e.value * e.multiplicity as f64).sum();
        prop_assert!((t.partial_sum() - via_mu).abs() <= 1e-12 * via_mu);
    }

    #[test]
    fn duality_on_power_families(p in prop::sample::select(vec![1.0, 1.5, 2.0, 3.0]), n in 8usize..60) {
        let s = dyadic(n);
        let l: Vec<f64> = s.iter().map(|v| v.powf(p)).collect();
        let r = regime_classify(&spectrum(&s), &spectrum(&l)).unwrap();
        prop_assert!(!(r.fim == Convergence::Converged && r.crb == Convergence::Converged));
    }
}

#[test]
fn power_family_regimes() {
    for (p, expect) in [
        (1.0, Regime::TraceClassFim),
        (1.5, Regime::TraceClassFim),
        (2.0, Regime::FiniteTruncationsOnly),
        (3.0, Regime::TraceClassCrb),
    ] {
        let s = dyadic(40);
        let l: Vec<f64> = s.iter().map(|v| v.powf(p)).collect();
        assert_eq!(regime_classify(&spectrum(&s), &spectrum(&l)).unwrap().regime, expect);
    }
}

#[test]
fn constructed_example_singular_values() {
    let (q, w2) = (3, 0.1);
    let s = dyadic(20);
    let sig = spectrum(&s);
    let lam = constructed_noise_spectrum(&sig, w2, q).unwrap();
    let mu = fisher_eigenvalues(&sig, &lam, ScalarField::Complex).unwrap();
    for (i, e) in mu.entries().iter().enumerate() {
        let expect = if i < q { s[i] * s[i] / w2 } else { s[i].powf(1.5) };
        assert!((e.value - expect).abs() <= f64::EPSILON * expect, "i={i}");
    }
    // trace from direct summation
    let direct: f64 = (0..20).map(|i| if i < q { s[i] * s[i] / w2 } else { s[i].powf(1.5) }).sum();
    let t = fisher_trace(&sig, &lam, &OverlapMatrix::identity(20)).unwrap();
    assert!((t.partial_sum() - direct).abs() < 1e-14 * direct);
    assert_eq!(t.convergence, Convergence::Converged);
    let rc = range_condition_diagnostic(&sig, &lam, &OverlapMatrix::identity(20), 20).unwrap();
    assert_eq!(rc.classification, RangeCondition::SatisfiedAtTruncation);
    for i in q..20 {
        assert!((rc.increments[i] - s[i]).abs() <= 1e-15 * s[i]);
    }
}

#[test]
fn finite_subspace_whiteness() {
    let s = dyadic(30);
    let (r, q, w2) = (4usize, 6usize, 1e-3);
    let sr = s[r - 1];
    assert!(sr * sr > w2 * s[q - 1].powf(1.5));
    let sig = spectrum(&s);
    let lam = constructed_noise_spectrum(&sig, w2, q).unwrap();
    let cm = cameron_martin_system(&sig, &lam).unwrap();
    for (i, m) in cm.iter().take(r).enumerate() {
        assert_eq!(m.original_rank, i);
        assert!((m.u_scale - w2.sqrt()).abs() < 1e-16);
        assert!((m.sigma_tilde - s[i] / w2.sqrt()).abs() <= 1e-15 * m.sigma_tilde);
    }
}

#[test]
fn value_ordering_resorts_by_fisher_eigenvalue() {
    let s = spectrum(&[1.0, 0.5, 0.25]);
    let l = spectrum(&[4.0, 0.01, 1.0]);
    let mu = fisher_eigenvalues(&s, &l, ScalarField::Complex).unwrap();
    assert_eq!(mu.entries()[0].label, Label::Index(0));
    let sorted = mu.with_ordering(Ordering::ByValueDesc);
    assert_eq!(sorted.entries()[0].label, Label::Index(1));
    let c = crb_curve(&sorted, 3).unwrap();
    assert!((c.points[0].1 - 0.04).abs() < 1e-15);
}
