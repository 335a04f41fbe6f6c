use dunklkit::dunkl::{dunkl_apply, dunkl_gradient, dunkl_laplacian, harmonic_basis, laplacian_explicit, square_identity_check};
use dunklkit::poly::{rat, rat_int, Poly, Rat};
use dunklkit::rootsys::{RootSystemData, RootSystemKind};
use proptest::prelude::*;

fn poly_strategy(nx: usize, has_y: bool, max_exp: u32, max_terms: usize) -> impl Strategy<Value = Poly> {
    let nv = nx + has_y as usize;
    prop::collection::vec((prop::collection::vec(0..=max_exp, nv), -6i64..=6, 1i64..=4), 0..=max_terms).prop_map(
        move |terms| {
            let mut p = Poly::zero(nx, has_y);
            for (e, n, d) in terms {
                p.add_term(e, rat(n, d));
            }
            p
        },
    )
}

fn systems() -> Vec<RootSystemData> {
    [
        RootSystemKind::Z2d { lambda: vec![rat(1, 2), rat_int(1), rat_int(2)] },
        RootSystemKind::A { rank: 2, kappa: rat_int(1) },
        RootSystemKind::B { dim: 2, kappa0: rat(1, 2), kappa1: rat(3, 2) },
    ]
    .iter()
    .map(|k| RootSystemData::build(k).unwrap())
    .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_axioms(p in poly_strategy(2, true, 3, 4), q in poly_strategy(2, true, 3, 4), r in poly_strategy(2, true, 3, 4)) {
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert!((&p - &p).is_zero());
        prop_assert_eq!(&p * &Poly::one(2, true), p.clone());
        let pt = [rat(1, 3), rat(-2, 5), rat(7, 2)];
        prop_assert_eq!((&p * &q).eval_rat(&pt).unwrap(), p.eval_rat(&pt).unwrap() * q.eval_rat(&pt).unwrap());
    }

    #[test]
    fn parse_print_round_trip(p in poly_strategy(3, true, 4, 5)) {
        let back = Poly::parse(&p.to_string(), 3, true).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn reflection_is_an_involution(p in poly_strategy(2, false, 4, 5), a in -3i64..=3, b in -3i64..=3) {
        prop_assume!(a != 0 || b != 0);
        let beta = vec![rat_int(a), rat_int(b)];
        prop_assert_eq!(p.reflect(&beta).reflect(&beta), p.clone());
        // (p - σp)/⟨β,x⟩ is a polynomial.
        prop_assert!((&p - &p.reflect(&beta)).div_linear(&beta).is_some());
    }

    #[test]
    fn dunkl_operators_commute(p in poly_strategy(3, false, 4, 4)) {
        let rs = &systems()[0];
        let g = dunkl_gradient(rs, &p).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                prop_assert_eq!(dunkl_apply(rs, i, &g[j]).unwrap(), dunkl_apply(rs, j, &g[i]).unwrap());
            }
        }
    }

    #[test]
    fn dunkl_operators_commute_b2(p in poly_strategy(2, false, 5, 4)) {
        let rs = &systems()[2];
        let g = dunkl_gradient(rs, &p).unwrap();
        prop_assert_eq!(dunkl_apply(rs, 0, &g[1]).unwrap(), dunkl_apply(rs, 1, &g[0]).unwrap());
    }

    #[test]
    fn reflection_equivariance(p in poly_strategy(2, false, 4, 4)) {
        // D_i(p∘M) = Σ_k M_{ki} (D_k p)∘M for every group element M.
        let rs = &systems()[2];
        let dp = dunkl_gradient(rs, &p).unwrap();
        for m in rs.group_exact.as_ref().unwrap() {
            let lhs = dunkl_gradient(rs, &p.act(m)).unwrap();
            for i in 0..2 {
                let mut rhs = Poly::zero(2, false);
                for k in 0..2 {
                    rhs = &rhs + &dp[k].act(m).scale(&m[k][i]);
                }
                prop_assert_eq!(&lhs[i], &rhs);
            }
            prop_assert_eq!(dunkl_laplacian(rs, &p.act(m)).unwrap(), dunkl_laplacian(rs, &p).unwrap().act(m));
        }
    }

    #[test]
    fn laplacian_forms_agree(p in poly_strategy(3, false, 4, 4)) {
        for rs in systems() {
            let q = if rs.dim == 3 { p.clone() } else { p.partial_eval(&[None, None, Some(rat(1, 2))]).drop_trailing(rs.dim) };
            let by_ops: Poly = (0..rs.dim).fold(Poly::zero(rs.dim, false), |acc, j| {
                let dj = dunkl_apply(&rs, j, &q).unwrap();
                &acc + &dunkl_apply(&rs, j, &dj).unwrap()
            });
            prop_assert_eq!(by_ops, laplacian_explicit(&rs, &q).unwrap());
        }
    }
}

trait DropTrailing {
    fn drop_trailing(&self, nx: usize) -> Poly;
}

impl DropTrailing for Poly {
    /// The same polynomial in the first `nx` variables.
    fn drop_trailing(&self, nx: usize) -> Poly {
        let mut out = Poly::zero(nx, false);
        for (m, c) in self.terms() {
            assert!(m.0[nx..].iter().all(|e| *e == 0));
            out.add_term(m.0[..nx].to_vec(), c.clone());
        }
        out
    }
}

#[test]
fn harmonic_basis_square_identity_b2() {
    let rs = &systems()[2];
    for n in 0..=4 {
        for u in harmonic_basis(rs, n).unwrap().basis {
            assert!(dunkl_laplacian(rs, &u).unwrap().is_zero());
            assert!(square_identity_check(rs, &u).unwrap().holds(), "{u}");
        }
    }
}

#[test]
fn rank_one_eigen_relation() {
    // D x^n = (n + λ(1 - (-1)^n)) x^{n-1} on Z2^1.
    let l = rat(2, 5);
    let rs = RootSystemData::build(&RootSystemKind::Z2d { lambda: vec![l.clone()] }).unwrap();
    for n in 1..8u32 {
        let p = Poly::monomial(1, false, vec![n], rat_int(1));
        let odd = if n % 2 == 1 { rat_int(2) * &l } else { Rat::from_integer(0.into()) };
        let want = Poly::monomial(1, false, vec![n - 1], rat_int(n as i64) + odd);
        assert_eq!(dunkl_apply(&rs, 0, &p).unwrap(), want);
    }
}
