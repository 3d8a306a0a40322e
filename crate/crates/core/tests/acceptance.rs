//! Acceptance runner. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex;
use num_integer::binomial;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use qudit_dicke::gate::{
    apply_controlled_gate, controlled_gate_matrix, embed_single, primitive_matrix,
};
use qudit_dicke::pruning::{
    build_pruned_u, build_pruned_u_with, predicted_pruned_counts, qubit_i_count,
};
use qudit_dicke::reference::{recursion_check, reference_dicke_state};
use qudit_dicke::synthesis::{
    build_i_operator, build_ii_operator, build_u, build_w, predicted_v_count, predicted_w_count,
};
use qudit_dicke::{
    CMatrix, Circuit, CompositionVector, Control, ControlledGate, GatePrimitive, PrunedSpec,
    QutritRule, Register, Simulator, State,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn run_input(c: &Circuit, k: &CompositionVector) -> State {
    let input = State::identity_permutation(k).unwrap();
    Simulator::default().run(c, &input).unwrap()
}

fn within_budget(elapsed: Duration, budget_secs: u64) -> bool {
    elapsed <= Duration::from_secs(budget_secs)
}

fn exhaustive_full() -> Outcome {
    let start = Instant::now();
    let mut cases = 0;
    let mut worst_fid = 1.0f64;
    let mut worst_sign = 0.0f64;
    let mut failures = Vec::new();
    for (d, max_n) in [(2, 10), (3, 6), (4, 5), (5, 4)] {
        for n in 1..=max_n {
            let u = build_u(n, d).unwrap();
            for k in CompositionVector::all(d, n) {
                let out = run_input(&u, &k);
                let reference = reference_dicke_state::<f64>(&k).unwrap();
                let fid = out.fidelity(&reference).unwrap();
                // distance from the closed half-line of real non-negative numbers
                let sign = out
                    .amplitudes()
                    .iter()
                    .map(|a| a.im.abs().max(-a.re))
                    .fold(0.0f64, f64::max);
                worst_fid = worst_fid.min(fid);
                worst_sign = worst_sign.max(sign);
                if fid < 1.0 - 1e-10 || sign > 1e-8 {
                    failures.push(format!("{k}"));
                }
                cases += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        failures.is_empty() && within_budget(elapsed, 60),
        format!(
            "{cases} cases, min fidelity {worst_fid:.16e}, max sign violation {:.3e}, {:.2?}, failures {failures:?}",
            worst_sign.abs(),
            elapsed
        ),
    )
}

/// `sum_s sqrt(k_s/m) |e(k - ŝ)> ⊗ |s>` built directly from digit strings.
fn w_contract_rhs(k: &CompositionVector) -> State {
    let (d, m) = (k.d(), k.n());
    let reg = Register::new(d, m).unwrap();
    let mut amps = vec![Complex::new(0.0, 0.0); reg.size()];
    for s in 0..d {
        let ks = k.parts()[s];
        if ks == 0 {
            continue;
        }
        let mut parts = k.parts().to_vec();
        parts[s] -= 1;
        // |e(k - ŝ)> on the upper m-1 wires: largest levels on the lowest wires
        let mut upper = Vec::with_capacity(m - 1);
        for level in (0..d).rev() {
            upper.extend(std::iter::repeat_n(level, parts[level]));
        }
        let mut digits = vec![s];
        digits.extend(upper);
        amps[reg.linear(&digits)].re += (ks as f64 / m as f64).sqrt();
    }
    State::from_amplitudes(d, m, amps).unwrap()
}

fn w_contract() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut cases = 0;
    for d in 2..=4 {
        for m in 2..=5 {
            let w = build_w(m, d, m).unwrap();
            for k in CompositionVector::all(d, m) {
                let out = run_input(&w, &k);
                worst = worst.max(out.max_abs_diff(&w_contract_rhs(&k)).unwrap());
                cases += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst <= 1e-10 && within_budget(elapsed, 10),
        format!("{cases} cases, max amplitude error {worst:.3e}, {elapsed:.2?}"),
    )
}

fn ket_set(s: &State, tol: f64) -> BTreeSet<String> {
    let reg = s.register();
    s.support(tol)
        .into_iter()
        .map(|i| reg.digits(i).iter().rev().map(|x| x.to_string()).collect())
        .collect()
}

fn check_fixture(parts: &[usize], kets: &[&str], amp: f64) -> Result<(), String> {
    let k = CompositionVector::new(parts.to_vec()).unwrap();
    let simulated = run_input(&build_u(k.n(), k.d()).unwrap(), &k);
    let reference = reference_dicke_state::<f64>(&k).unwrap();
    let expect: BTreeSet<String> = kets.iter().map(|s| s.to_string()).collect();
    for (name, s) in [("simulated", &simulated), ("reference", &reference)] {
        let got = ket_set(s, 1e-10);
        if got != expect {
            return Err(format!("{k} {name} support {got:?}"));
        }
        for i in s.support(1e-10) {
            let a = s.amplitudes()[i];
            if (a.re - amp).abs() > 1e-10 || a.im.abs() > 1e-10 {
                return Err(format!("{k} {name} amplitude {a} at {i}"));
            }
        }
    }
    Ok(())
}

fn worked_examples() -> Outcome {
    let qutrit_211 = [
        "0012", "1002", "0102", "0021", "0201", "2001", "0210", "0120", "1020", "1200", "2010",
        "2100",
    ];
    let qutrit_111 = ["012", "021", "102", "120", "201", "210"];
    let qubit_22 = ["0011", "0101", "0110", "1001", "1010", "1100"];
    let results = [
        check_fixture(&[2, 1, 1], &qutrit_211, 1.0 / 12f64.sqrt()),
        check_fixture(&[1, 1, 1], &qutrit_111, 1.0 / 6f64.sqrt()),
        check_fixture(&[2, 2], &qubit_22, 1.0 / 6f64.sqrt()),
    ];
    let errors: Vec<String> = results.into_iter().filter_map(|r| r.err()).collect();
    outcome(
        errors.is_empty(),
        if errors.is_empty() {
            "3 fixtures".to_string()
        } else {
            errors.join("; ")
        },
    )
}

fn pruning_equivalence() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut worst_fid = 1.0f64;
    let mut cases = 0;
    let mut failures = Vec::new();
    let mut covering_failures = Vec::new();
    for (d, max_n) in [(2, 12), (3, 6)] {
        for n in 1..=max_n {
            let full = build_u(n, d).unwrap();
            for k in CompositionVector::all(d, n) {
                let spec = PrunedSpec::new(k.clone()).unwrap();
                let pruned = build_pruned_u(&spec).unwrap();
                let a = run_input(&pruned, &k);
                let b = run_input(&full, &k);
                if d == 3 {
                    let covering = run_input(
                        &build_pruned_u_with(&spec, QutritRule::Covering).unwrap(),
                        &k,
                    );
                    if covering.max_abs_diff(&b).unwrap() > 1e-10 {
                        covering_failures.push(format!("{k}"));
                    }
                }
                let diff = a.max_abs_diff(&b).unwrap();
                let fid = a
                    .fidelity(&reference_dicke_state::<f64>(&k).unwrap())
                    .unwrap();
                worst = worst.max(diff);
                worst_fid = worst_fid.min(fid);
                if diff > 1e-10 || fid < 1.0 - 1e-10 {
                    failures.push(format!("{k}"));
                }
                cases += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        failures.is_empty() && within_budget(elapsed, 60),
        format!(
            "{cases} cases, max pruned/full difference {worst:.3e}, min fidelity {worst_fid:.16e}, {elapsed:.2?}, failures {failures:?} (covering qutrit rule failures {covering_failures:?})"
        ),
    )
}

fn count_identities() -> Outcome {
    let mut errors = Vec::new();
    for d in 2..=5usize {
        for n in 2..=8usize {
            let u = build_u(n, d).unwrap();
            let by_m = u.v_operator_count_by_m();
            for m in 2..=n {
                // the j = 1 term of W_m is d identity operators, none of them gates
                let got = by_m.get(&m).copied().unwrap_or(0) as u64 + d as u64;
                let expect = binomial((m + d - 1) as u64, (d - 1) as u64);
                if got != expect || predicted_w_count(m, d).unwrap() != expect {
                    errors.push(format!("W d={d} m={m}: {got} vs {expect}"));
                }
            }
            let total = (u.v_operator_count() + d * (n - 1)) as u64;
            let expect = ((n + 1) as u64 * binomial((n + d) as u64, (d - 1) as u64)) / d as u64
                - d as u64
                - 1;
            if total != expect || predicted_v_count(n, d).unwrap() != expect {
                errors.push(format!("U d={d} n={n}: {total} vs {expect}"));
            }
        }
    }
    for (d, max_n) in [(2usize, 12usize), (3, 6)] {
        for n in 1..=max_n {
            for k in CompositionVector::all(d, n) {
                let spec = PrunedSpec::new(k.clone()).unwrap();
                let counts = build_pruned_u(&spec).unwrap().count_by_tag();
                let (ni, nii) = predicted_pruned_counts(&spec);
                let got_i = counts.get("I").copied().unwrap_or(0) as i64;
                let got_ii = counts.get("II").copied().unwrap_or(0) as i64;
                if (got_i, got_ii) != (ni, nii) {
                    errors.push(format!("pruned {k}: ({got_i},{got_ii}) vs ({ni},{nii})"));
                }
                // brute-force count of the qubit index set
                if d == 2 {
                    let l = k.parts()[1];
                    let brute = (2..=n)
                        .map(|m| (1..m).filter(|&lp| lp <= l && lp + n >= l + m).count())
                        .sum::<usize>() as i64;
                    if brute != ni || qubit_i_count(n, l) != qubit_i_count(n, n - l) {
                        errors.push(format!("qubit count n={n} l={l}"));
                    }
                }
            }
        }
    }
    let w4 = build_w(4, 3, 4).unwrap().count_by_tag();
    if (w4.get("I"), w4.get("II")) != (Some(&3), Some(&3)) {
        errors.push(format!("qutrit W_4 tags {w4:?}"));
    }
    outcome(
        errors.is_empty(),
        if errors.is_empty() {
            "d<=5 n<=8, pruned d=2 n<=12, d=3 n<=6".into()
        } else {
            errors.join("; ")
        },
    )
}

type Spec = (char, usize, usize, usize, f64, Vec<(usize, usize)>);

fn x(target: usize, i: usize, j: usize, controls: &[(usize, usize)]) -> Spec {
    ('X', target, i, j, 0.0, controls.to_vec())
}

fn r(i: usize, j: usize, theta: f64, controls: &[(usize, usize)]) -> Spec {
    ('R', 0, i, j, theta, controls.to_vec())
}

fn theta(num: usize, den: usize) -> f64 {
    -2.0 * ((num as f64) / (den as f64)).sqrt().acos()
}

fn compare(name: &str, got: &Circuit, expect: &[Spec]) -> Result<(), String> {
    if got.size() != expect.len() {
        return Err(format!(
            "{name}: {} gates, expected {}",
            got.size(),
            expect.len()
        ));
    }
    for (idx, (g, e)) in got.gates().iter().zip(expect).enumerate() {
        let controls: Vec<(usize, usize)> =
            g.controls().iter().map(|c| (c.wire, c.value)).collect();
        let mut want = e.5.clone();
        want.sort();
        let (kind, i, j, th) = match *g.primitive() {
            GatePrimitive::Not { i, j } => ('X', i, j, 0.0),
            GatePrimitive::Rotation { i, j, theta } => ('R', i, j, theta),
        };
        if kind != e.0
            || g.target() != e.1
            || (i, j) != (e.2, e.3)
            || controls != want
            || (th - e.4).abs() > 1e-12
        {
            return Err(format!("{name}: gate {idx} is {g}"));
        }
    }
    Ok(())
}

/// Pre-NOT, rotation, post-NOT for one pair of levels.
fn v_block(l: usize, i0: usize, i1: usize, th: f64, rot: &[(usize, usize)]) -> Vec<Spec> {
    vec![
        x(l, i0, i1, &[(0, i1)]),
        r(i0, i1, th, rot),
        x(l, i0, i1, &[(0, i1)]),
    ]
}

fn qutrit_i(m: usize, l: usize, rot: impl Fn(usize, usize) -> Vec<(usize, usize)>) -> Vec<Spec> {
    [(0, 1), (0, 2), (1, 2)]
        .into_iter()
        .flat_map(|(i0, i1)| v_block(l, i0, i1, theta(l, m), &rot(i0, i1)))
        .collect()
}

fn ii_fixture(
    l1: usize,
    l2: usize,
    m: usize,
    rot1: &[(usize, usize)],
    rot2: &[(usize, usize)],
) -> Vec<Spec> {
    let t1 = theta(l2, m);
    let t2 = theta(l1 - l2, m - l2);
    let mut v = v_block(l2, 1, 2, t1, rot1);
    v.extend(v_block(l1, 0, 1, t2, rot2));
    v
}

fn structural_fixtures() -> Outcome {
    let mut checks: Vec<(String, Circuit, Vec<Spec>)> = Vec::new();

    // qubit I, l = 1 and l > 1
    checks.push((
        "qubit I_{4,1}".into(),
        build_i_operator(4, 1, 2, 4).unwrap(),
        v_block(1, 0, 1, theta(1, 4), &[(1, 1)]),
    ));
    checks.push((
        "qubit I_{5,3}".into(),
        build_i_operator(5, 3, 2, 5).unwrap(),
        v_block(3, 0, 1, theta(3, 5), &[(2, 1), (3, 1)]),
    ));

    // qutrit I with l = 1, m = 2: the i0 control lands on wire l and is superseded
    checks.push((
        "qutrit I_{2,1}".into(),
        build_i_operator(2, 1, 3, 2).unwrap(),
        qutrit_i(2, 1, |_, i1| vec![(1, i1)]),
    ));
    // l = 1, m > 2
    checks.push((
        "qutrit I_{4,1}".into(),
        build_i_operator(4, 1, 3, 4).unwrap(),
        qutrit_i(4, 1, |i0, i1| {
            let mut c = vec![(1, i1)];
            if i0 > 0 {
                c.push((3, i0));
            }
            c
        }),
    ));
    // generic 2 <= l <= m-2
    for l in [2, 3] {
        checks.push((
            format!("qutrit I_{{5,{l}}}"),
            build_i_operator(5, l, 3, 5).unwrap(),
            qutrit_i(5, l, |i0, i1| {
                let mut c = vec![(l - 1, i1), (l, i1)];
                if i0 > 0 {
                    c.push((4, i0));
                }
                c
            }),
        ));
    }
    // l = m - 1
    for m in [3, 5] {
        checks.push((
            format!("qutrit I_{{{m},{}}}", m - 1),
            build_i_operator(m, m - 1, 3, m).unwrap(),
            qutrit_i(m, m - 1, |_, i1| vec![(m - 2, i1), (m - 1, i1)]),
        ));
    }

    // II, generic
    checks.push((
        "II_{6,4,2}".into(),
        build_ii_operator(6, 4, 2, 6).unwrap(),
        ii_fixture(
            4,
            2,
            6,
            &[(1, 2), (2, 2), (3, 1), (4, 0)],
            &[(1, 2), (2, 2), (3, 1), (4, 1)],
        ),
    ));
    // l2 = 1, l1 = 2
    for m in [3, 5] {
        checks.push((
            format!("II_{{{m},2,1}}"),
            build_ii_operator(m, 2, 1, m).unwrap(),
            ii_fixture(2, 1, m, &[(1, 2), (2, 0)], &[(1, 2), (2, 1)]),
        ));
    }
    // l2 = 1, 2 < l1 <= m-1
    checks.push((
        "II_{5,4,1}".into(),
        build_ii_operator(5, 4, 1, 5).unwrap(),
        ii_fixture(
            4,
            1,
            5,
            &[(1, 2), (3, 1), (4, 0)],
            &[(1, 2), (3, 1), (4, 1)],
        ),
    ));
    // l2 > 1, l1 = l2 + 1
    checks.push((
        "II_{5,3,2}".into(),
        build_ii_operator(5, 3, 2, 5).unwrap(),
        ii_fixture(
            3,
            2,
            5,
            &[(1, 2), (2, 2), (3, 0)],
            &[(1, 2), (2, 2), (3, 1)],
        ),
    ));

    let errors: Vec<String> = checks
        .iter()
        .filter_map(|(name, c, e)| compare(name, c, e).err())
        .collect();
    outcome(
        errors.is_empty(),
        if errors.is_empty() {
            format!("{} operators", checks.len())
        } else {
            errors.join("; ")
        },
    )
}

fn random_gate(rng: &mut StdRng, d: usize, n: usize) -> ControlledGate {
    let target = rng.gen_range(0..n);
    let i = rng.gen_range(0..d - 1);
    let j = rng.gen_range(i + 1..d);
    let primitive = if rng.gen_bool(0.5) {
        GatePrimitive::Not { i, j }
    } else {
        GatePrimitive::Rotation {
            i,
            j,
            theta: rng.gen_range(-2.0 * PI..2.0 * PI),
        }
    };
    let mut controls = Vec::new();
    for w in (0..n).filter(|&w| w != target) {
        if rng.gen_bool(0.5) {
            controls.push(Control::new(w, rng.gen_range(0..d)));
        }
    }
    ControlledGate::new(target, primitive, controls).unwrap()
}

fn random_state(rng: &mut StdRng, d: usize, n: usize) -> State {
    let size = d.pow(n as u32);
    let amps = (0..size)
        .map(|_| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    State::from_amplitudes(d, n, amps).unwrap()
}

fn appendix_identities() -> Outcome {
    let mut errors = Vec::new();

    let x12 = primitive_matrix::<f64>(&GatePrimitive::Not { i: 1, j: 2 }, 3).unwrap();
    let x02 = primitive_matrix::<f64>(&GatePrimitive::Not { i: 0, j: 2 }, 3).unwrap();
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let cx = |value: usize| {
            let g =
                ControlledGate::new(0, GatePrimitive::Not { i, j }, vec![Control::new(1, value)])
                    .unwrap();
            controlled_gate_matrix::<f64>(&g, 3, 2).unwrap()
        };
        let (c0, c1, c2) = (cx(0), cx(1), cx(2));
        for (lhs, flip, label) in [(&c1, &x12, "[1]"), (&c0, &x02, "[0]")] {
            let f = embed_single(flip, 1, 2).unwrap();
            let rhs = &(&f * &c2) * &f;
            if lhs != &rhs {
                errors.push(format!("C^{label} X^({i}{j})"));
            }
        }
        // block-diagonal layout: the block sits on the rows whose wire-1 digit is the control value
        let xm = primitive_matrix::<f64>(&GatePrimitive::Not { i, j }, 3).unwrap();
        for (value, m) in [(0, &c0), (1, &c1), (2, &c2)] {
            let mut expect = CMatrix::identity(9);
            for a in 0..3 {
                for b in 0..3 {
                    expect[(3 * value + a, 3 * value + b)] = xm[(a, b)];
                }
            }
            if m != &expect {
                errors.push(format!("block C^[{value}] X^({i}{j})"));
            }
        }
    }

    let mut rng = StdRng::seed_from_u64(7);
    let mut worst_unitarity = 0.0f64;
    for d in 2..=5 {
        for i in 0..d {
            for j in i + 1..d {
                for g in [
                    GatePrimitive::Not { i, j },
                    GatePrimitive::Rotation {
                        i,
                        j,
                        theta: rng.gen_range(-2.0 * PI..2.0 * PI),
                    },
                ] {
                    worst_unitarity = worst_unitarity
                        .max(primitive_matrix::<f64>(&g, d).unwrap().unitarity_error());
                }
            }
        }
    }
    let mut worst_kernel = 0.0f64;
    for (d, n) in [(2, 1), (2, 3), (3, 2), (3, 3), (4, 2), (5, 2)] {
        for _ in 0..20 {
            let g = random_gate(&mut rng, d, n);
            let m = controlled_gate_matrix::<f64>(&g, d, n).unwrap();
            worst_unitarity = worst_unitarity.max(m.unitarity_error());
            for _ in 0..5 {
                let s = random_state(&mut rng, d, n);
                let by_kernel = apply_controlled_gate(&s, &g).unwrap();
                let by_matrix = State::from_amplitudes(d, n, m.apply(s.amplitudes())).unwrap();
                worst_kernel = worst_kernel.max(by_kernel.max_abs_diff(&by_matrix).unwrap());
            }
        }
    }
    if worst_unitarity > 1e-10 {
        errors.push(format!("unitarity error {worst_unitarity:.3e}"));
    }
    if worst_kernel > 1e-12 {
        errors.push(format!("kernel/matrix difference {worst_kernel:.3e}"));
    }
    outcome(
        errors.is_empty(),
        format!(
            "unitarity {worst_unitarity:.3e}, kernel/matrix {worst_kernel:.3e} {}",
            errors.join("; ")
        ),
    )
}

fn recursion_oracle() -> Outcome {
    let mut cases = 0;
    let mut failures = Vec::new();
    for d in 2..=4 {
        for n in 2..=5 {
            for k in CompositionVector::all(d, n) {
                if !recursion_check(&k).unwrap() {
                    failures.push(format!("{k}"));
                }
                cases += 1;
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!("{cases} cases, failures {failures:?}"),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 exhaustive full-circuit correctness", exhaustive_full),
        ("2 W operator contract", w_contract),
        ("3 worked-example fixtures", worked_examples),
        ("4 pruning equivalence", pruning_equivalence),
        ("5 count identities", count_identities),
        ("6 structural fixtures", structural_fixtures),
        ("7 gate matrix identities", appendix_identities),
        ("8 recursion oracle", recursion_oracle),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let o = f();
        println!(
            "{} criterion {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        if !o.pass {
            failed += 1;
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
