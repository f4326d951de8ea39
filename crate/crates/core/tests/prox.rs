mod common;

use adasmooth::oracle::grid_minimize_1d;
use adasmooth::prox::{moreau_conjugate_prox, soft_threshold};
use adasmooth::{Error, LinearMap, ProxFn, SetSpec};
use common::*;
use proptest::prelude::*;

#[test]
fn soft_threshold_examples() {
    assert_eq!(soft_threshold(&[2.0, -0.5, 0.1], 0.5).unwrap(), vec![1.5, 0.0, 0.0]);
    let x = [0.3, -7.0, 0.0];
    assert_eq!(soft_threshold(&x, 0.0).unwrap(), x.to_vec());
    assert!(matches!(soft_threshold(&[1.0], -0.1), Err(Error::InvalidArgument(_))));

    let y = soft_threshold(&[-3.0], 1.0).unwrap()[0];
    assert_eq!(y, -2.0);
    let (_, grid) = grid_minimize_1d(|v| v.abs() + 0.5 * (v + 3.0) * (v + 3.0), -5.0, 5.0, 1e-4).unwrap();
    assert!((grid - y).abs() <= 2e-4);
}

#[test]
fn projection_examples() {
    let l2 = SetSpec::l2_ball(1.0f64).unwrap();
    let p = l2.project(&[3.0, 4.0]).unwrap();
    assert!((p[0] - 0.6).abs() < 1e-15 && (p[1] - 0.8).abs() < 1e-15);
    assert_eq!(
        SetSpec::linf_ball(1.0).unwrap().project(&[2.0, -0.3]).unwrap(),
        vec![1.0, -0.3]
    );
    assert_eq!(
        SetSpec::<f64>::NonnegativeOrthant.project(&[-1.0, 2.0]).unwrap(),
        vec![0.0, 2.0]
    );
    assert_eq!(SetSpec::<f64>::ZeroCone.project(&[-1.0, 2.0]).unwrap(), vec![0.0, 0.0]);
    let b = SetSpec::boxed(vec![0.0, -1.0], vec![1.0, 1.0]).unwrap();
    assert_eq!(b.project(&[2.0, -3.0]).unwrap(), vec![1.0, -1.0]);
    // boundary points are returned unchanged
    assert_eq!(l2.project(&[0.6, 0.8]).unwrap(), vec![0.6, 0.8]);
}

#[test]
fn set_validation() {
    assert!(SetSpec::<f64>::l2_ball(0.0).is_err());
    assert!(SetSpec::<f64>::linf_ball(-1.0).is_err());
    assert!(SetSpec::boxed(vec![1.0], vec![0.0]).is_err());
    let b = SetSpec::boxed(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
    assert!(b.project(&[0.5]).is_err());
}

#[test]
fn prox_examples() {
    let x = vec![1.5, -2.0];
    assert_eq!(ProxFn::Zero.prox_of(3.0, &x).unwrap(), x);
    let s = ProxFn::support(SetSpec::ZeroCone, vec![0.0, 0.0]).unwrap();
    assert_eq!(s.prox_of(1.0, &x).unwrap(), x);
    // With the zero cone the support term vanishes: g(x) = -<b, x>, prox = x + beta b.
    let s = ProxFn::support(SetSpec::ZeroCone, vec![1.0, -1.0]).unwrap();
    assert_eq!(s.prox_of(0.5, &x).unwrap(), vec![2.0, -2.5]);

    let l1 = ProxFn::l1(1.0).unwrap();
    assert_eq!(l1.prox_of(2.0, &[5.0]).unwrap(), vec![3.0]);
    let (_, grid) = grid_minimize_1d(|v| v.abs() + (v - 5.0) * (v - 5.0) / 4.0, -10.0, 10.0, 1e-4).unwrap();
    assert!((grid - 3.0).abs() <= 2e-4);

    assert!(l1.prox_of(0.0, &[1.0]).is_err());
    assert!(ProxFn::l1(-1.0).is_err());
}

#[test]
fn non_orthogonal_map_is_rejected() {
    let w = LinearMap::from_rows(&[vec![2.0, 0.0], vec![0.0, 1.0]]).unwrap();
    assert!(matches!(ProxFn::l1_orthogonal(w, 1.0), Err(Error::Config(_))));
    let h = LinearMap::haar(4, 4, 2).unwrap();
    assert!(ProxFn::l1_orthogonal(h, 1.0).is_ok());
}

#[test]
fn orthogonal_l1_prox_matches_definition() {
    // prox of λ‖Wx‖₁ equals Wᵀ shrink(Wx): check optimality via the transformed problem.
    let mut r = rng(21);
    let h = LinearMap::haar(4, 4, 2).unwrap();
    let g = ProxFn::l1_orthogonal(h.clone(), 0.3).unwrap();
    let x = uniform_vec(&mut r, 16, 1.0);
    let p = g.prox_of(0.5, &x).unwrap();
    let obj = |y: &[f64]| g.value(y).unwrap() + dist(y, &x).powi(2) / 1.0;
    let base = obj(&p);
    for _ in 0..200 {
        let d = uniform_vec(&mut r, 16, 1e-3);
        let y: Vec<f64> = p.iter().zip(&d).map(|(a, b)| a + b).collect();
        assert!(obj(&y) >= base - 1e-12);
    }
}

#[test]
fn one_dimensional_proxes_match_grid() {
    let kinds: Vec<ProxFn<f64>> = vec![
        ProxFn::Zero,
        ProxFn::l1(0.7).unwrap(),
        ProxFn::l1_shifted(0.4, vec![0.9]).unwrap(),
        ProxFn::Indicator(SetSpec::linf_ball(0.5).unwrap()),
        ProxFn::Indicator(SetSpec::l2_ball(0.5).unwrap()),
        ProxFn::Indicator(SetSpec::NonnegativeOrthant),
        ProxFn::Indicator(SetSpec::boxed(vec![-0.2], vec![1.1]).unwrap()),
        ProxFn::support(SetSpec::NonnegativeOrthant, vec![0.3]).unwrap(),
        ProxFn::support(SetSpec::boxed(vec![-1.0], vec![2.0]).unwrap(), vec![0.5]).unwrap(),
        ProxFn::support(SetSpec::ZeroCone, vec![-0.6]).unwrap(),
        ProxFn::QuadraticDistance { center: vec![0.25] },
    ];
    let mut r = rng(22);
    for g in &kinds {
        for _ in 0..10 {
            let x = r_range(&mut r, 3.0);
            let beta = [0.3, 1.0, 2.5][(x.abs() * 10.0) as usize % 3];
            let p = g.prox_of(beta, &[x]).unwrap()[0];
            let obj = |v: f64| {
                let gv = g.value(&[v]).unwrap();
                if gv.is_finite() {
                    gv + (v - x) * (v - x) / (2.0 * beta)
                } else {
                    f64::INFINITY
                }
            };
            let (_, grid) = grid_minimize_1d(obj, -6.0, 6.0, 1e-4).unwrap();
            assert!(
                (grid - p).abs() <= 2e-4,
                "{g:?} beta={beta} x={x}: prox {p} grid {grid}"
            );
        }
    }
}

fn r_range(r: &mut rand_chacha::ChaCha8Rng, s: f64) -> f64 {
    uniform_vec(r, 1, s)[0]
}

#[test]
fn moreau_examples() {
    let l1 = ProxFn::l1(1.0).unwrap();
    let v = [2.0, 0.5];
    let got = l1.prox_conjugate(1.0, &v).unwrap();
    assert_eq!(got, vec![1.0, 0.5]);
    assert_eq!(got, SetSpec::linf_ball(1.0).unwrap().project(&v).unwrap());

    let zero: ProxFn<f64> = ProxFn::Zero;
    for gamma in [0.1, 1.0, 10.0] {
        assert_eq!(zero.prox_conjugate(gamma, &[3.0, -1.0]).unwrap(), vec![0.0, 0.0]);
    }
    assert!(moreau_conjugate_prox(|t, w| l1.prox_of(t, w), 0.0, &v).is_err());
}

#[test]
fn moreau_identity_residual() {
    let mut r = rng(23);
    let l1 = ProxFn::l1(0.8).unwrap();
    for i in 0..100 {
        let gamma = [0.1, 1.0, 10.0][i % 3];
        let w = uniform_vec(&mut r, 5, 4.0);
        let p = l1.prox_of(gamma, &w).unwrap();
        let scaled: Vec<f64> = w.iter().map(|v| v / gamma).collect();
        let c = l1.prox_conjugate(gamma, &scaled).unwrap();
        let res: f64 = p
            .iter()
            .zip(&c)
            .zip(&w)
            .map(|((a, b), x)| (a + gamma * b - x).abs())
            .fold(0.0, f64::max);
        assert!(res <= 1e-12, "residual {res}");
    }
}

fn arb_set() -> impl Strategy<Value = SetSpec<f64>> {
    prop_oneof![
        (0.1f64..3.0).prop_map(|r| SetSpec::l2_ball(r).unwrap()),
        (0.1f64..3.0).prop_map(|r| SetSpec::linf_ball(r).unwrap()),
        (0.1f64..3.0, -1.0f64..1.0).prop_map(|(r, c)| SetSpec::l2_ball_at(Some(vec![c; 4]), r).unwrap()),
        Just(SetSpec::NonnegativeOrthant),
        Just(SetSpec::ZeroCone),
        (-2.0f64..0.0, 0.0f64..2.0).prop_map(|(l, h)| SetSpec::boxed(vec![l; 4], vec![h; 4]).unwrap()),
    ]
}

fn arb_prox() -> impl Strategy<Value = ProxFn<f64>> {
    prop_oneof![
        Just(ProxFn::Zero),
        (0.0f64..3.0).prop_map(|w| ProxFn::l1(w).unwrap()),
        (0.0f64..3.0).prop_map(|w| ProxFn::l1_orthogonal(LinearMap::haar(2, 2, 1).unwrap(), w).unwrap()),
        arb_set().prop_map(ProxFn::Indicator),
        (arb_set(), -1.0f64..1.0).prop_map(|(s, b)| ProxFn::support(s, vec![b; 4]).unwrap()),
        Just(ProxFn::QuadraticDistance {
            center: vec![0.5, -0.5, 1.0, 0.0]
        }),
    ]
}

proptest! {
    #[test]
    fn projections_are_idempotent(set in arb_set(), v in prop::collection::vec(-10.0f64..10.0, 4)) {
        let p = set.project(&v).unwrap();
        prop_assert_eq!(set.project(&p).unwrap(), p.clone());
        prop_assert!(set.contains(&p, 1e-12).unwrap());
    }

    #[test]
    fn proxes_are_firmly_nonexpansive(
        g in arb_prox(),
        beta in 0.05f64..5.0,
        x in prop::collection::vec(-5.0f64..5.0, 4),
        y in prop::collection::vec(-5.0f64..5.0, 4),
    ) {
        let px = g.prox_of(beta, &x).unwrap();
        let py = g.prox_of(beta, &y).unwrap();
        let d: Vec<f64> = px.iter().zip(&py).map(|(a, b)| a - b).collect();
        let e: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a - b).collect();
        prop_assert!(dot(&d, &d) <= dot(&d, &e) + 1e-10);
    }
}
