use membrane_iso::quadrature::integrate_rel;
use membrane_iso::specfun::{mu1_ball, p_zero, RadialProfile};

fn sample(r: f64, count: usize) -> impl Iterator<Item = f64> {
    (1..=count).map(move |i| r * i as f64 / (count as f64 + 1.0))
}

#[test]
fn profile_is_increasing_and_below_its_chord_slope() {
    for n in 2..=10 {
        for r in [0.5, 1.0, 3.0] {
            let g = RadialProfile::euclidean(n, r).unwrap();
            assert_eq!(g.value(0.0), 0.0);
            assert!(g.derivative(0.0) > 0.0);
            for t in sample(r, 200).chain([r]) {
                let (v, d) = (g.value(t), g.derivative(t));
                assert!(v > 0.0, "n={n} t={t}");
                if t < r {
                    assert!(d > -1e-12, "n={n} t={t}: g' = {d}");
                }
                assert!(d - v / t <= 1e-12, "n={n} t={t}: {}", d - v / t);
            }
            assert!(g.derivative(r).abs() < 1e-12);
        }
    }
}

#[test]
fn energy_density_is_non_increasing_out_to_twice_the_radius() {
    for n in 2..=10 {
        let r = 1.0;
        let g = RadialProfile::euclidean(n, r).unwrap();
        let mut lowest = f64::INFINITY;
        for i in 1..=200 {
            let t = 2.0 * r * i as f64 / 200.0;
            let e = g.energy_density(t);
            assert!(e <= lowest + 1e-10, "n={n} t={t}: {e} > {lowest}");
            lowest = lowest.min(e);
            let direct = g.capped_derivative(t).powi(2) + (n as f64 - 1.0) * (g.capped_value(t) / t).powi(2);
            assert!((e - direct).abs() <= 1e-14 * direct.max(1.0));
        }
    }
}

#[test]
fn profile_solves_the_radial_equation() {
    for n in 2..=10 {
        let r = 1.0;
        let g = RadialProfile::euclidean(n, r).unwrap();
        let mu = mu1_ball(n, r).unwrap();
        let m = n as f64 - 1.0;
        for i in 1..=100 {
            let t = r * i as f64 / 101.0;
            let res = g.second_derivative(t) + m * g.derivative(t) / t + (mu - m / (t * t)) * g.value(t);
            assert!(res.abs() < 1e-8, "n={n} t={t}: {res}");
        }
    }
}

#[test]
fn radial_rayleigh_quotient_is_the_ball_eigenvalue() {
    for n in 2..=10 {
        for r in [0.7, 1.0, 2.0] {
            let g = RadialProfile::euclidean(n, r).unwrap();
            let m = n as f64 - 1.0;
            let w = |t: f64| t.powi(n as i32 - 1);
            let num = integrate_rel(
                |t| {
                    let (v, d) = (g.value(t), g.derivative(t));
                    let q = if t > 0.0 { v / t } else { g.derivative(0.0) };
                    (d * d + m * q * q) * w(t)
                },
                0.0,
                r,
                1e-13,
            )
            .unwrap();
            let den = integrate_rel(|t| g.value(t).powi(2) * w(t), 0.0, r, 1e-13).unwrap();
            let want = (p_zero(n).unwrap() / r).powi(2);
            assert!((num / den - want).abs() < 1e-8 * want, "n={n} r={r}");
        }
    }
}

#[test]
fn radius_only_rescales_the_profile() {
    for n in [2usize, 3, 5] {
        let one = RadialProfile::euclidean(n, 1.0).unwrap();
        for s in [0.25, 2.0, 7.5] {
            let g = RadialProfile::euclidean(n, s).unwrap();
            assert_eq!(g.zero(), one.zero());
            let factor = s.powf(1.0 - n as f64 / 2.0);
            for i in 1..=50 {
                let u = i as f64 / 50.0;
                let want = factor * one.value(u);
                assert!(
                    (g.value(s * u) - want).abs() <= 1e-12 * want.abs().max(1e-300),
                    "n={n} s={s}"
                );
            }
            // the maximum of the capped profile sits at the radius
            let argmax = (1..=400)
                .map(|i| 2.0 * s * i as f64 / 400.0)
                .fold((f64::NEG_INFINITY, 0.0), |best, t| {
                    let v = g.capped_value(t);
                    if v > best.0 {
                        (v, t)
                    } else {
                        best
                    }
                })
                .1;
            assert!((argmax - s).abs() <= 2.0 * s / 400.0);
        }
    }
}

#[test]
fn capped_extension_is_constant_beyond_the_radius() {
    let g = RadialProfile::euclidean(4, 1.5).unwrap();
    for t in [1.5001, 2.0, 10.0] {
        assert_eq!(g.capped_value(t), g.value(1.5));
        assert_eq!(g.capped_derivative(t), 0.0);
    }
}
