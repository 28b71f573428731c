//! Acceptance gate: every shipped guarantee as one test, each printing a
//! single `[PASS]`/`[FAIL]` line with the measured numbers before asserting.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines
//! for passing criteria as well.

use std::time::Instant;

use nspsd::bench::{self, Regime, Scenario, Shape};
use nspsd::matrix::sym_part;
use nspsd::{
    embed, hermitian_eigenvalues, is_nspsd, nhpsd_check, nspsd_project, reduce, solve,
    solve_complex, solve_general, solve_rank_one, svd, sym_eig, Attainment, ComplexDense,
    DenseMatrix, InitStrategy, SolveOptions,
};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn gate(name: &str, pass: bool, detail: &str) {
    let tag = if pass { "[PASS]" } else { "[FAIL]" };
    println!("{tag} {name}: {detail}");
    assert!(pass, "{name}: {detail}");
}

fn randn(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DenseMatrix {
    let entries: Vec<f64> = (0..rows * cols).map(|_| rng.sample(StandardNormal)).collect();
    DenseMatrix::from_rows(rows, cols, &entries).unwrap()
}

fn random_orthogonal(rng: &mut ChaCha8Rng, n: usize) -> DenseMatrix {
    svd(&randn(rng, n, n), None).unwrap().u
}

#[test]
fn criterion_1_bundled_compliance_example() {
    let (x, b) = bench::compliance_example();
    let opts = SolveOptions {
        delta: 1e-9,
        max_iterations: 200_000,
        ..SolveOptions::default()
    };
    let start = Instant::now();
    let sol = solve(&x, &b, &opts).unwrap();
    let seconds = start.elapsed().as_secs_f64();

    let relative_error = 100.0 * sol.objective / b.frobenius_norm();
    let mut eigenvalues = sym_eig(&sym_part(&sol.a).unwrap().scale(2.0))
        .unwrap()
        .eigenvalues;
    eigenvalues.reverse(); // ascending
    let targets = [0.0, 10.28, 17.36];
    let eig_dev = eigenvalues
        .iter()
        .zip(targets)
        .map(|(e, t)| (e - t).abs())
        .fold(0.0, f64::max);
    let entry_dev = (&sol.a - &bench::compliance_reference_solution()).max_abs();

    let pass = (relative_error - 18.99).abs() <= 0.5
        && eig_dev <= 0.2
        && entry_dev <= 0.05
        && seconds < 1.0;
    gate(
        "criterion 1 (bundled compliance example)",
        pass,
        &format!(
            "relative error {relative_error:.3}% (18.99 +- 0.5), eigenvalues {:?} \
             vs {targets:?} (max dev {eig_dev:.3} <= 0.2), max entry dev {entry_dev:.4} \
             (<= 0.05), runtime {seconds:.3}s (< 1s)",
            eigenvalues
                .iter()
                .map(|e| (e * 1000.0).round() / 1000.0)
                .collect::<Vec<_>>()
        ),
    );
}

#[test]
fn criterion_2_bundled_complex_example() {
    let (x, b) = bench::complex_example();
    let opts = SolveOptions {
        delta: 1e-9,
        max_iterations: 200_000,
        ..SolveOptions::default()
    };
    let start = Instant::now();
    let sol = solve_complex(&x, &b, &opts).unwrap();
    let seconds = start.elapsed().as_secs_f64();

    let herm = sol.a.add(&sol.a.adjoint());
    let eigenvalues = hermitian_eigenvalues(&herm).unwrap();
    let above: Vec<f64> = eigenvalues.iter().copied().filter(|e| *e > 1e-4).collect();
    let single = above.len() == 1 && (above[0] - 3.04).abs() <= 0.02;

    let pass = (sol.objective - 3.04).abs() <= 0.02
        && single
        && sol.objective < bench::COMPLEX_EXAMPLE_SYMMETRIC_PSD_ERROR
        && seconds < 1.0;
    gate(
        "criterion 2 (bundled complex example)",
        pass,
        &format!(
            "objective {:.4} (3.04 +- 0.02), eigenvalues of A+A* above 1e-4: {:?} \
             (want exactly one, equal to 3.04 +- 0.02), objective < {} symmetric-PSD \
             reference: {}, runtime {seconds:.3}s (< 1s)",
            sol.objective,
            above,
            bench::COMPLEX_EXAMPLE_SYMMETRIC_PSD_ERROR,
            sol.objective < bench::COMPLEX_EXAMPLE_SYMMETRIC_PSD_ERROR
        ),
    );
}

#[test]
fn criterion_3_benchmark_table_reproduction() {
    let scenarios = bench::all_scenarios(60, 20, 0);
    let start = Instant::now();
    let rows = bench::run_bench(&scenarios, &SolveOptions::default()).unwrap();
    let seconds = start.elapsed().as_secs_f64();

    // (scenario id, recorded mean relative error %, tolerance in pp)
    let targets = [
        ("well/square/60", 18.37, 1.5),
        ("well/wide/60", 26.56, 1.5),
        ("well/tall/60", 17.43, 1.5),
        ("ill/square/60", 20.49, 2.0),
        ("ill/wide/60", 27.71, 2.0),
        ("ill/tall/60", 20.16, 2.0),
        ("rankdef/square/60", 21.79, 1.5),
        ("rankdef/wide/60", 27.57, 1.5),
        ("rankdef/tall/60", 26.17, 1.5),
    ];
    let mut detail = String::new();
    let mut pass = seconds < 300.0;
    for (id, target, tol) in targets {
        let row = rows
            .iter()
            .find(|r| r.scenario == id)
            .unwrap_or_else(|| panic!("missing scenario {id}"));
        let ok = (row.rel_err_mean - target).abs() <= tol && row.failures == 0;
        pass &= ok;
        detail.push_str(&format!(
            "{id} {:.2}% (target {target} +- {tol}){} ",
            row.rel_err_mean,
            if ok { "" } else { " <-- OUT" },
        ));
    }
    detail.push_str(&format!("batch {seconds:.1}s (< 300s)"));
    gate("criterion 3 (benchmark table reproduction)", pass, &detail);
}

/// Independent slow oracle: fixed-step projected gradient on the full-size
/// problem — step 1/(2L), up to 10^6 iterations, no momentum, no reduction.
/// Stops early only at a machine fixed point of the iteration map.
fn projected_gradient_oracle(x: &DenseMatrix, b: &DenseMatrix) -> f64 {
    let xt = x.transpose();
    let xxt = sym_part(&(x * &xt)).unwrap();
    let bxt = b * &xt;
    let lips = sym_eig(&xxt).unwrap().eigenvalues[0].max(f64::MIN_POSITIVE);
    let step = 1.0 / (2.0 * lips);
    let n = x.rows();
    let mut a = DenseMatrix::zeros(n, n);
    let mut first_move: Option<f64> = None;
    for _ in 0..1_000_000 {
        let gradient = &(&a * &xxt) - &bxt;
        let next = nspsd_project(&(&a - &gradient.scale(step))).unwrap();
        let moved = (&next - &a).frobenius_norm();
        a = next;
        let reference = *first_move.get_or_insert(moved);
        if moved <= 1e-16 * reference {
            break;
        }
    }
    (&(&a * x) - b).frobenius_norm()
}

#[test]
fn criterion_4_projected_gradient_oracle_agreement() {
    let opts = SolveOptions {
        delta: 1e-10,
        max_iterations: 200_000,
        ..SolveOptions::default()
    };
    let mut instances = Vec::new();
    'outer: for trial in 0.. {
        for regime in [Regime::WellConditioned, Regime::IllConditioned, Regime::RankDeficient] {
            for shape in [Shape::Square, Shape::Wide, Shape::Tall] {
                let mut sc = Scenario::new(regime, shape, 4);
                sc.max_dim = 6;
                sc.trials = trial + 1;
                instances.push((regime, bench::gen_instance(&sc, trial).unwrap()));
                if instances.len() == 50 {
                    break 'outer;
                }
            }
        }
    }

    let mut max_diff = [0.0f64; 3]; // per regime
    for (regime, (x, b)) in &instances {
        let sol = solve(x, b, &opts).unwrap();
        let oracle = projected_gradient_oracle(x, b);
        let diff = (sol.objective - oracle).abs();
        let slot = match regime {
            Regime::WellConditioned => 0,
            Regime::IllConditioned => 1,
            Regime::RankDeficient => 2,
        };
        max_diff[slot] = max_diff[slot].max(diff);
    }
    let pass = max_diff.iter().all(|d| *d <= 1e-6);
    gate(
        "criterion 4 (projected-gradient oracle agreement)",
        pass,
        &format!(
            "max |objective difference| over 50 instances (tolerance 1e-6): \
             well {:.3e}, ill {:.3e}, rankdef {:.3e}; a fixed-step oracle at \
             step 1/(2L) contracts the slowest error mode by (1 - 1/(2k^2)) per \
             iteration, so at k = 10^6 it cannot converge within 10^6 iterations \
             and the comparison on the ill regime measures the oracle's \
             truncation error, not solver accuracy",
            max_diff[0], max_diff[1], max_diff[2]
        ),
    );
}

#[test]
fn criterion_5_rank_one_closed_form_agreement() {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let opts = SolveOptions {
        delta: 1e-10,
        max_iterations: 100_000,
        ..SolveOptions::default()
    };
    let mut max_obj_diff = 0.0f64;
    let mut max_a_diff = 0.0f64;
    let mut attained_count = 0usize;
    for _ in 0..50 {
        let n = rng.random_range(2..=6);
        let m = rng.random_range(1..=6);
        let u: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let v: Vec<f64> = (0..m).map(|_| rng.sample(StandardNormal)).collect();
        let x = DenseMatrix::from_fn(n, m, |i, j| u[i] * v[j]);
        let b = randn(&mut rng, n, m);

        let closed = solve_rank_one(&x, &b).unwrap();
        let generic = solve_general(&x, &b, &opts).unwrap();
        max_obj_diff = max_obj_diff.max((closed.objective - generic.objective).abs());
        if closed.attained.is_attained() {
            attained_count += 1;
            max_a_diff = max_a_diff.max((&closed.a - &generic.a).frobenius_norm());
        }
    }
    let pass = max_obj_diff <= 1e-6 && max_a_diff <= 1e-5;
    gate(
        "criterion 5 (rank-one closed form vs generic pipeline)",
        pass,
        &format!(
            "50 rank-1 instances: max |objective difference| {max_obj_diff:.3e} (<= 1e-6), \
             max Frobenius distance on the {attained_count} attained instances \
             {max_a_diff:.3e} (<= 1e-5)"
        ),
    );
}

/// Property bundle; each closure returns the worst violation measured.
#[test]
fn criterion_6_property_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(606);

    // Projection: membership, idempotency, the variational inequality
    // <A - P(A), Y - P(A)> <= 0 for feasible Y, and trace nonnegativity.
    let mut idem = 0.0f64;
    let mut varineq = 0.0f64;
    let mut trace_min = f64::INFINITY;
    for _ in 0..10 {
        let n = rng.random_range(2..=7);
        let a = randn(&mut rng, n, n).scale(2.0);
        let p = nspsd_project(&a).unwrap();
        assert!(is_nspsd(&p, None).unwrap().is_member);
        let scale = 1.0 + p.frobenius_norm();
        idem = idem.max((&nspsd_project(&p).unwrap() - &p).frobenius_norm() / scale);
        trace_min = trace_min.min(p.trace() / scale);
        let residual = &a - &p;
        for _ in 0..20 {
            let g = randn(&mut rng, n, n);
            let skew = randn(&mut rng, n, n);
            let member = &(&g * &g.transpose()) + &(&skew - &skew.transpose());
            let inner = residual.dot(&(&member - &p));
            varineq = varineq.max(inner / (scale * (1.0 + member.frobenius_norm())));
        }
    }

    // Reduction identity: for any lifted A with coupling block 2Z, the
    // objective splits into the subproblem residual plus the fixed part.
    let mut reduction_dev = 0.0f64;
    for trial in 0..6 {
        let mut sc = Scenario::new(
            if trial % 2 == 0 {
                Regime::RankDeficient
            } else {
                Regime::WellConditioned
            },
            [Shape::Square, Shape::Wide, Shape::Tall][trial % 3],
            11,
        );
        sc.max_dim = 8;
        sc.trials = trial + 1;
        let (x, b) = bench::gen_instance(&sc, trial).unwrap();
        let rp = reduce(&x, &b, None).unwrap();
        let (n, r) = (rp.n(), rp.rank());
        let a11 = randn(&mut rng, r, r);
        let mut ahat = DenseMatrix::zeros(n, n);
        ahat.set_block(0, 0, &a11);
        if r < n {
            ahat.set_block(r, 0, &rp.z().scale(2.0));
            ahat.set_block(r, r, &randn(&mut rng, n - r, n - r));
        }
        let a = &(&rp.svd.u * &ahat) * &rp.svd.u.transpose();
        let direct = (&(&a * &x) - &b).frobenius_norm().powi(2);
        let split = rp.subproblem_residual_sq(&a11) + rp.residual_sq;
        reduction_dev = reduction_dev.max((direct - split).abs() / (1.0 + direct));
    }

    // Minimal-norm dominance: growing the trailing block of an optimal
    // solution by any PSD bump keeps the objective but never shrinks the norm.
    let mut dominance = 0.0f64;
    for _ in 0..4 {
        let (n, m) = (6, 3);
        let x = randn(&mut rng, n, m);
        let g = randn(&mut rng, n, n);
        let skew = randn(&mut rng, n, n);
        let a_star = &(&(&g * &g.transpose()).scale(0.3) + &DenseMatrix::identity(n))
            + &(&skew - &skew.transpose()).scale(0.3);
        let b = &(&a_star * &x) + &randn(&mut rng, n, m).scale(0.1);
        let sol = solve(
            &x,
            &b,
            &SolveOptions {
                delta: 1e-11,
                max_iterations: 100_000,
                ..SolveOptions::default()
            },
        )
        .unwrap();
        assert_eq!(sol.attained, Attainment::Exact);
        let rp = reduce(&x, &b, None).unwrap();
        let r = rp.rank();
        let basis = &rp.svd.u;
        let ahat = &(&basis.transpose() * &sol.a) * basis;
        for _ in 0..5 {
            let q = randn(&mut rng, n - r, n - r);
            let mut bumped = ahat.clone();
            bumped.set_block(r, r, &(&ahat.block(r, r, n - r, n - r) + &(&q * &q.transpose())));
            let alt = &(basis * &bumped) * &basis.transpose();
            assert!(is_nspsd(&alt, None).unwrap().is_member);
            let alt_obj = (&(&alt * &x) - &b).frobenius_norm();
            assert!((alt_obj - sol.objective).abs() <= 1e-8 * (1.0 + sol.objective));
            dominance = dominance.max(sol.a.frobenius_norm() - alt.frobenius_norm());
        }
    }

    // Gradient of f(A) = 0.5 ||AX-B||^2 against central differences.
    let mut grad_dev = 0.0f64;
    for _ in 0..5 {
        let (n, m) = (rng.random_range(2..=5), rng.random_range(2..=5));
        let x = randn(&mut rng, n, m);
        let b = randn(&mut rng, n, m);
        let a = randn(&mut rng, n, n);
        let gradient = &(&(&a * &x) - &b) * &x.transpose();
        let f = |a: &DenseMatrix| 0.5 * (&(a * &x) - &b).frobenius_norm().powi(2);
        for _ in 0..8 {
            let dir = randn(&mut rng, n, n);
            let dir = dir.scale(1.0 / dir.frobenius_norm());
            let h = 1e-6 * (1.0 + a.frobenius_norm());
            let fd = (f(&(&a + &dir.scale(h))) - f(&(&a - &dir.scale(h)))) / (2.0 * h);
            let an = gradient.dot(&dir);
            grad_dev = grad_dev.max((fd - an).abs() / (1.0 + an.abs()));
        }
    }

    // Embedding identities: conjugating R(A) by the fixed unitary
    // U = (1/sqrt(2)) [[I, iI],[iI, I]] block-diagonalizes it to (A, conj(A));
    // membership in the complex cone matches membership of the embedding.
    let mut embed_dev = 0.0f64;
    let mut membership_mismatch = 0usize;
    for _ in 0..8 {
        let n = rng.random_range(2..=4);
        let z = ComplexDense::new(randn(&mut rng, n, n), randn(&mut rng, n, n)).unwrap();
        let scale_inv = 1.0 / 2.0f64.sqrt();
        let eye = DenseMatrix::identity(n).scale(scale_inv);
        let mut u_re = DenseMatrix::zeros(2 * n, 2 * n);
        u_re.set_block(0, 0, &eye);
        u_re.set_block(n, n, &eye);
        let mut u_im = DenseMatrix::zeros(2 * n, 2 * n);
        u_im.set_block(0, n, &eye);
        u_im.set_block(n, 0, &eye);
        let unitary = ComplexDense::new(u_re, u_im).unwrap();
        let r = ComplexDense::from_real(embed(&z).matrix.clone());
        let conj = unitary.adjoint().mul(&r).mul(&unitary);
        let mut blk_re = DenseMatrix::zeros(2 * n, 2 * n);
        blk_re.set_block(0, 0, &z.re);
        blk_re.set_block(n, n, &z.re);
        let mut blk_im = DenseMatrix::zeros(2 * n, 2 * n);
        blk_im.set_block(0, 0, &z.im);
        blk_im.set_block(n, n, &z.im.scale(-1.0));
        let blk = ComplexDense::new(blk_re, blk_im).unwrap();
        embed_dev = embed_dev
            .max(conj.sub(&blk).frobenius_norm() / (1.0 + z.frobenius_norm()))
            .max(
                (embed(&z).matrix.frobenius_norm() - 2.0f64.sqrt() * z.frobenius_norm()).abs()
                    / (1.0 + z.frobenius_norm()),
            );

        // candidate members and non-members, checked on both sides
        let g = ComplexDense::new(randn(&mut rng, n, n), randn(&mut rng, n, n)).unwrap();
        let herm_psd = g.mul(&g.adjoint());
        let s = ComplexDense::new(randn(&mut rng, n, n), randn(&mut rng, n, n)).unwrap();
        let skew = s.sub(&s.adjoint()).scale(0.5);
        for cand in [herm_psd.add(&skew), z.clone(), skew.sub(&herm_psd)] {
            let complex_side = nhpsd_check(&cand, None).unwrap().is_member;
            let real_side = is_nspsd(&embed(&cand).matrix, None).unwrap().is_member;
            if complex_side != real_side {
                membership_mismatch += 1;
            }
        }
    }

    // Epsilon guarantee on instances whose infimum the lifted family cannot
    // attain: the returned feasible A satisfies obj^2 < inf^2 + eps.
    let mut eps_ok = true;
    let mut eps_margin = 0.0f64;
    let base_x = DenseMatrix::from_rows(3, 2, &[2.0, 0.0, 0.0, 1.0, 0.0, 0.0]).unwrap();
    let base_b =
        DenseMatrix::from_rows(3, 2, &[0.0, 1.0, -1.0, 0.0, 1.0, 1.0]).unwrap();
    let two_col_x = DenseMatrix::from_rows(2, 1, &[1.0, 0.0]).unwrap();
    let two_col_b = DenseMatrix::from_rows(2, 1, &[0.0, 1.0]).unwrap();
    let mut cases = vec![
        (base_x.clone(), base_b.clone(), None),
        (base_x.clone(), base_b.scale(2.5), Some(1e-4)),
        (two_col_x.clone(), two_col_b.clone(), None),
        (two_col_x, two_col_b.scale(3.0), Some(1e-6)),
    ];
    for _ in 0..2 {
        let q = random_orthogonal(&mut rng, 3);
        cases.push((&q * &base_x, &q * &base_b, None));
    }
    for (x, b, requested) in cases {
        let opts = SolveOptions {
            delta: 1e-11,
            max_iterations: 100_000,
            epsilon: requested,
            ..SolveOptions::default()
        };
        let sol = solve_general(&x, &b, &opts).unwrap();
        let eps = match sol.attained.epsilon() {
            Some(e) => e,
            None => {
                eps_ok = false;
                continue;
            }
        };
        if let Some(r) = requested {
            eps_ok &= eps <= r;
        }
        eps_ok &= is_nspsd(&sol.a, None).unwrap().is_member;
        let gap = sol.objective.powi(2) - sol.infimum_value.powi(2);
        eps_ok &= gap < eps;
        eps_margin = eps_margin.max(gap / eps);
    }

    let pass = idem <= 1e-12
        && varineq <= 1e-9
        && trace_min >= -1e-12
        && reduction_dev <= 1e-8
        && dominance <= 1e-9
        && grad_dev <= 1e-5
        && embed_dev <= 1e-12
        && membership_mismatch == 0
        && eps_ok;
    gate(
        "criterion 6 (property suite)",
        pass,
        &format!(
            "projection idempotency {idem:.2e} (<= 1e-12), variational inequality \
             {varineq:.2e} (<= 1e-9), min trace {trace_min:.2e} (>= -1e-12), reduction \
             identity {reduction_dev:.2e} (<= 1e-8), minimal-norm dominance margin \
             {dominance:.2e} (<= 1e-9), gradient vs finite differences {grad_dev:.2e} \
             (<= 1e-5), embedding identities {embed_dev:.2e} (<= 1e-12), membership \
             mismatches {membership_mismatch} (= 0), epsilon guarantee holds: {eps_ok} \
             (worst gap/eps {eps_margin:.3})"
        ),
    );
}

#[test]
fn criterion_7_initialization_independence() {
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let tight = |init: InitStrategy| SolveOptions {
        delta: 1e-12,
        max_iterations: 300_000,
        init,
        ..SolveOptions::default()
    };
    let mut max_diff = 0.0f64;
    let mut cases = Vec::new();
    // three square full-rank instances, redrawn until mildly conditioned
    while cases.len() < 3 {
        let x = randn(&mut rng, 5, 5);
        let sv = svd(&x, None).unwrap();
        if sv.numeric_rank == 5 && sv.singular_values[0] / sv.singular_values[4] < 100.0 {
            cases.push((x.clone(), randn(&mut rng, 5, 5)));
        }
    }
    // three tall full-column-rank instances with an interior optimum
    for _ in 0..3 {
        let (n, m) = (6, 4);
        let x = randn(&mut rng, n, m);
        assert_eq!(svd(&x, None).unwrap().numeric_rank, m);
        let g = randn(&mut rng, n, n);
        let skew = randn(&mut rng, n, n);
        let a_star = &(&(&g * &g.transpose()).scale(0.3) + &DenseMatrix::identity(n))
            + &(&skew - &skew.transpose()).scale(0.3);
        let b = &(&a_star * &x) + &randn(&mut rng, n, m).scale(0.1);
        cases.push((x, b));
    }
    for (x, b) in &cases {
        let from_scaled = solve(x, b, &tight(InitStrategy::ScaledIdentity)).unwrap();
        let from_blocks = solve(x, b, &tight(InitStrategy::BlockDiagonal)).unwrap();
        max_diff = max_diff.max((&from_scaled.a - &from_blocks.a).frobenius_norm());
    }
    gate(
        "criterion 7 (initialization independence on full-column-rank X)",
        max_diff <= 1e-6,
        &format!(
            "max Frobenius distance between solutions from scaled-identity and \
             block-diagonal starts over 6 instances: {max_diff:.3e} (<= 1e-6)"
        ),
    );
}
