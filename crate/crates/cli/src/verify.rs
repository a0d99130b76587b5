//! Randomized identity suites behind `commutant verify`.
//!
//! Suite `s` (its position in [`Suite::ALL`]) draws trial `t` from the stream
//! `(seed, s, t)`, so a report depends only on the configuration.

use clap::ValueEnum;
use commutant::commutation::conjugate_kron;
use commutant::ctensor::{ctensor_power, identity_2m, permute_modes};
use commutant::preserver::{certify_rank1, verify_rank_preservation};
use commutant::vec_kron::{kron, kron_vec, unvec, vec, VecLayout};
use commutant::{
    json, rng, CommutationMatrix, CommutationTensor, DenseTensor, Error, Gct, Matrix,
    MatrixPreserver, ModePermTensor, Permutation, RankPreserver, Result, Shape,
};

/// Largest dense tensor a suite will materialize.
const MAX_DENSE: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum)]
pub enum Suite {
    VecIdentity,
    SwapLaw,
    KronConjugation,
    Powers,
    GroupAxioms,
    ModePermLemma,
    PreserverSuite,
    All,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::VecIdentity,
        Suite::SwapLaw,
        Suite::KronConjugation,
        Suite::Powers,
        Suite::GroupAxioms,
        Suite::ModePermLemma,
        Suite::PreserverSuite,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::VecIdentity => "vec-identity",
            Suite::SwapLaw => "swap-law",
            Suite::KronConjugation => "kron-conjugation",
            Suite::Powers => "powers",
            Suite::GroupAxioms => "group-axioms",
            Suite::ModePermLemma => "mode-perm-lemma",
            Suite::PreserverSuite => "preserver-suite",
            Suite::All => "all",
        }
    }

    fn stream_id(self) -> u32 {
        Suite::ALL.iter().position(|&s| s == self).unwrap_or(0) as u32
    }

    /// Replaces `all` by every suite and drops duplicates, keeping canonical order.
    pub fn expand(selected: &[Suite]) -> Vec<Suite> {
        if selected.contains(&Suite::All) {
            return Suite::ALL.to_vec();
        }
        Suite::ALL
            .iter()
            .copied()
            .filter(|s| selected.contains(s))
            .collect()
    }
}

/// Validated settings shared by every suite.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub sizes: Vec<(usize, usize)>,
    pub seed: u64,
    pub trials: usize,
    pub tol: f64,
}

impl RunConfig {
    pub fn new(
        sizes: Vec<(usize, usize)>,
        seed: u64,
        trials: usize,
        tol: f64,
    ) -> std::result::Result<Self, String> {
        if sizes.is_empty() {
            return Err("at least one size is required".into());
        }
        if trials == 0 {
            return Err("--trials must be at least 1".into());
        }
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(format!("--tol must be a positive number, got {tol}"));
        }
        Ok(RunConfig {
            sizes,
            seed,
            trials,
            tol,
        })
    }
}

/// Outcome of one suite at one size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub size: (usize, usize),
    pub checks: usize,
    pub passed: usize,
    pub failures: Vec<String>,
    pub note: Option<String>,
}

impl SuiteReport {
    pub fn passed_all(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Default)]
struct Tally {
    checks: usize,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn finish(self, suite: Suite, size: (usize, usize), note: Option<String>) -> SuiteReport {
        SuiteReport {
            suite,
            size,
            passed: self.checks - self.failures.len(),
            checks: self.checks,
            failures: self.failures,
            note,
        }
    }
}

fn corrupt_vec(v: &mut [f64]) {
    if let Some(x) = v.first_mut() {
        *x += 1.0;
    }
}

fn corrupt(t: &DenseTensor) -> DenseTensor {
    let first = vec![0; t.order()];
    t.with_entry(&first, t.get(&first) + 1.0)
}

fn check_dense_budget(n: usize, order: usize) -> Result<()> {
    let ok = n
        .checked_pow(order as u32)
        .is_some_and(|len| len <= MAX_DENSE);
    if !ok {
        return Err(Error::Argument(format!(
            "extent {n} at order {order} exceeds the dense budget of {MAX_DENSE} entries"
        )));
    }
    Ok(())
}

/// Runs each suite at each configured size.
pub fn run_suites(suites: &[Suite], cfg: &RunConfig, fault: bool) -> Result<Vec<SuiteReport>> {
    let mut reports = Vec::new();
    for &suite in suites {
        for &size in &cfg.sizes {
            reports.push(run_suite(suite, size, cfg, fault)?);
        }
    }
    Ok(reports)
}

pub fn run_suite(
    suite: Suite,
    size: (usize, usize),
    cfg: &RunConfig,
    fault: bool,
) -> Result<SuiteReport> {
    let (a, b) = size;
    match suite {
        Suite::VecIdentity => vec_identity(a, b, cfg, fault),
        Suite::SwapLaw => swap_law(a, b, cfg, fault),
        Suite::KronConjugation => kron_conjugation(a, b, cfg, fault),
        Suite::Powers => powers(a, b, fault),
        Suite::GroupAxioms => group_axioms(a, b, fault),
        Suite::ModePermLemma => mode_perm_lemma(a, b, cfg, fault),
        Suite::PreserverSuite => preserver_suite(a, b, cfg, fault),
        Suite::All => Err(Error::Argument("`all` is not a single suite".into())),
    }
}

/// The matrix whose column `c` is `vec(E_cᵀ)`, `E_c` the `c`-th `p×q` basis matrix.
pub fn commutation_from_transpose(p: usize, q: usize) -> Result<Matrix> {
    let n = p * q;
    let mut k = Matrix::zeros(n, n);
    for c in 0..n {
        let mut basis = vec![0.0; n];
        basis[c] = 1.0;
        let e = unvec(&basis, p, q, VecLayout::ColumnMajor)?;
        for (r, v) in vec(&e.transpose()).into_iter().enumerate() {
            k.set(r, c, v);
        }
    }
    Ok(k)
}

/// The matrix fixed by `K(x ⊗ y) = y ⊗ x` on basis vectors `x ∈ R^q`, `y ∈ R^p`.
pub fn commutation_from_swap(p: usize, q: usize) -> Matrix {
    let n = p * q;
    let mut k = Matrix::zeros(n, n);
    let basis = |len: usize, i: usize| -> Vec<f64> {
        (0..len).map(|r| if r == i { 1.0 } else { 0.0 }).collect()
    };
    for i in 0..p {
        for j in 0..q {
            let (x, y) = (basis(q, j), basis(p, i));
            let col = kron_vec(&x, &y)
                .iter()
                .position(|&v| v == 1.0)
                .expect("basis vector");
            for (r, v) in kron_vec(&y, &x).into_iter().enumerate() {
                k.set(r, col, v);
            }
        }
    }
    k
}

fn vec_identity(p: usize, q: usize, cfg: &RunConfig, fault: bool) -> Result<SuiteReport> {
    let suite = Suite::VecIdentity;
    let k = CommutationMatrix::new(p, q)?;
    let mut tally = Tally::default();
    for t in 0..cfg.trials {
        let mut r = rng::stream(cfg.seed, suite.stream_id(), t as u32);
        let x = rng::matrix(&mut r, p, q);
        let mut lhs = k.apply(&vec(&x))?;
        if fault && t == 0 {
            corrupt_vec(&mut lhs);
        }
        tally.check(lhs == vec(&x.transpose()), || {
            format!("trial {t}: K vec(X) != vec(X^T)")
        });
    }
    let rebuilt = commutation_from_transpose(p, q)?;
    tally.check(rebuilt == k.to_dense(), || {
        "basis reconstruction differs from K".into()
    });
    Ok(tally.finish(suite, (p, q), None))
}

fn swap_law(p: usize, q: usize, cfg: &RunConfig, fault: bool) -> Result<SuiteReport> {
    let suite = Suite::SwapLaw;
    let k = CommutationMatrix::new(p, q)?;
    let mut tally = Tally::default();
    for t in 0..cfg.trials {
        let mut r = rng::stream(cfg.seed, suite.stream_id(), t as u32);
        let x = rng::vector(&mut r, q);
        let y = rng::vector(&mut r, p);
        let mut lhs = k.apply(&kron_vec(&x, &y))?;
        if fault && t == 0 {
            corrupt_vec(&mut lhs);
        }
        tally.check(lhs == kron_vec(&y, &x), || {
            format!("trial {t}: K (x⊗y) != y⊗x")
        });
    }
    let rebuilt = commutation_from_swap(p, q);
    tally.check(rebuilt == k.to_dense(), || {
        "swap reconstruction differs from K".into()
    });
    Ok(tally.finish(suite, (p, q), None))
}

fn kron_conjugation(p: usize, q: usize, cfg: &RunConfig, fault: bool) -> Result<SuiteReport> {
    let suite = Suite::KronConjugation;
    let mut tally = Tally::default();
    for t in 0..cfg.trials {
        let mut r = rng::stream(cfg.seed, suite.stream_id(), t as u32);
        let a = rng::matrix(&mut r, p, p);
        let b = rng::matrix(&mut r, q, q);
        let mut lhs = conjugate_kron(&a, &b)?;
        if fault && t == 0 {
            lhs.set(0, 0, lhs.get(0, 0) + 1.0);
        }
        let diff = lhs.max_abs_diff(&kron(&a, &b));
        tally.check(diff <= cfg.tol, || {
            format!("trial {t}: |K(B⊗A)K - A⊗B| = {diff:e}")
        });
    }
    Ok(tally.finish(suite, (p, q), None))
}

/// Size `(k, n)`: every power `1..=k` of the `n×n` commutation tensor.
fn powers(k_max: usize, n: usize, fault: bool) -> Result<SuiteReport> {
    let suite = Suite::Powers;
    check_dense_budget(n, 4)?;
    let base = CommutationTensor::new(n, n)?.into_dense();
    let square = base.mul_2m(&base)?;
    let mut tally = Tally::default();
    let id = identity_2m(2, n)?;
    tally.check(square == id, || "K^2 is not the pairwise identity".into());
    for k in 1..=k_max {
        let mut pk = ctensor_power(k, n)?;
        if fault && k == 1 {
            pk = corrupt(&pk);
        }
        let (expected, label) = if k % 2 == 1 {
            (&base, "K")
        } else {
            (&square, "K^2")
        };
        tally.check(&pk == expected, || format!("K^{k} != {label}"));
    }
    Ok(tally.finish(suite, (k_max, n), None))
}

/// Size `(m, n)`: the group `{𝒦^π : π ∈ S_n}` of order-`2m` tensors.
fn group_axioms(m: usize, n: usize, fault: bool) -> Result<SuiteReport> {
    let suite = Suite::GroupAxioms;
    if n > 5 {
        return Err(Error::Argument(format!(
            "group-axioms enumerates S_n; n = {n} exceeds 5"
        )));
    }
    check_dense_budget(n, 2 * m)?;
    let perms = Permutation::all(n);
    let elements = perms
        .iter()
        .map(|p| Gct::from_permutation(p, m))
        .collect::<Result<Vec<_>>>()?;
    let dense: Vec<DenseTensor> = elements.iter().map(Gct::to_dense).collect();
    let identity = Gct::identity(m, n)?;
    let id_dense = identity.to_dense();
    let mut tally = Tally::default();
    let mut closed = 0;
    let mut products = 0;
    for (i, (g, gd)) in elements.iter().zip(&dense).enumerate() {
        for (j, (h, hd)) in elements.iter().zip(&dense).enumerate() {
            let mut structured = g.multiply(h)?.to_dense();
            if fault && i == 0 && j == 0 {
                structured = corrupt(&structured);
            }
            let ok = structured == gd.mul_2m(hd)? && dense.contains(&structured);
            products += 1;
            if ok {
                closed += 1;
            }
            tally.check(ok, || {
                format!(
                    "product of {:?} and {:?} leaves the group or disagrees with the dense product",
                    perms[i].to_one_based(),
                    perms[j].to_one_based()
                )
            });
        }
        let label = || format!("{:?}", perms[i].to_one_based());
        tally.check(
            g.multiply(&identity)? == *g
                && identity.multiply(g)? == *g
                && gd.mul_2m(&id_dense)? == *gd,
            || format!("identity law fails at {}", label()),
        );
        let inv = g.inverse()?;
        tally.check(
            inv == Gct::from_permutation(&perms[i].inverse(), m)?
                && gd.mul_2m(&inv.to_dense())? == id_dense
                && inv.to_dense().mul_2m(gd)? == id_dense,
            || format!("inverse law fails at {}", label()),
        );
    }
    let note = format!("products closed {closed}/{products}");
    Ok(tally.finish(suite, (m, n), Some(note)))
}

/// Size `(m, n)`: every `τ ∈ S_m` on random order-`m`, extent-`n` tensors.
fn mode_perm_lemma(m: usize, n: usize, cfg: &RunConfig, fault: bool) -> Result<SuiteReport> {
    let suite = Suite::ModePermLemma;
    if m > 6 {
        return Err(Error::Argument(format!(
            "mode-perm-lemma enumerates S_m; m = {m} exceeds 6"
        )));
    }
    check_dense_budget(n, 2 * m)?;
    let shape = Shape::cube(m, n)?;
    let mut tally = Tally::default();
    for (ti, tau) in Permutation::all(m).into_iter().enumerate() {
        let k = ModePermTensor::new(tau.clone(), n)?.to_dense();
        for t in 0..cfg.trials {
            let mut r = rng::stream(cfg.seed, suite.stream_id(), t as u32);
            let a = rng::tensor(&mut r, shape.dims());
            let mut shuffled = permute_modes(&a, &tau)?;
            if fault && ti == 0 && t == 0 {
                shuffled = corrupt(&shuffled);
            }
            let diff = shuffled.max_abs_diff(&k.mul_2m_on_m(&a)?);
            tally.check(diff <= cfg.tol, || {
                format!(
                    "tau {:?}, trial {t}: shuffle and contraction differ by {diff:e}",
                    tau.to_one_based()
                )
            });
        }
    }
    Ok(tally.finish(suite, (m, n), None))
}

/// Size `(m, n)`: rank-1 preservation for every `τ ∈ S_m`, plus the matrix
/// branches when `m = 2`.
fn preserver_suite(m: usize, n: usize, cfg: &RunConfig, fault: bool) -> Result<SuiteReport> {
    let suite = Suite::PreserverSuite;
    if m > 6 {
        return Err(Error::Argument(format!(
            "preserver-suite enumerates S_m; m = {m} exceeds 6"
        )));
    }
    check_dense_budget(n, m)?;
    let mut tally = Tally::default();
    let id = suite.stream_id();
    for (ti, tau) in Permutation::all(m).into_iter().enumerate() {
        // matrices come from trial ids above the per-trial range
        let mut r = rng::stream(cfg.seed, id, u32::MAX - ti as u32);
        let matrices: Vec<Matrix> = (0..m).map(|_| rng::invertible(&mut r, n)).collect();
        let phi = RankPreserver::new(matrices.clone(), tau.clone())?;
        let report = verify_rank_preservation(&phi, cfg.trials, cfg.seed.wrapping_add(ti as u64));
        for t in 0..report.trials {
            tally.check(!report.failures.contains(&t), || {
                format!(
                    "tau {:?}, trial {t}: image is not rank-1",
                    tau.to_one_based()
                )
            });
        }
        if fault && ti == 0 {
            let probe = rng::nonzero_vector(&mut r, n);
            let image = phi.apply(&commutant::cp::rank1(&vec![probe; m])?)?;
            // the zero tensor has no rank-1 certificate
            let bad = image.scale(0.0);
            tally.check(certify_rank1(&bad), || {
                format!("tau {:?}: injected image is not rank-1", tau.to_one_based())
            });
        }
        if m == 2 {
            let transposed = !tau.is_identity();
            let mp =
                MatrixPreserver::new(matrices[0].clone(), matrices[1].transpose(), transposed)?;
            for t in 0..cfg.trials {
                let mut r = rng::stream(cfg.seed, id, t as u32);
                let a = rng::matrix(&mut r, n, n);
                let via_tensor = phi.apply(&DenseTensor::from_matrix(&a))?.to_matrix()?;
                let diff = via_tensor.max_abs_diff(&mp.apply(&a)?);
                tally.check(diff <= cfg.tol, || {
                    format!("transposed={transposed}, trial {t}: tensor and sandwich forms differ by {diff:e}")
                });
            }
        }
    }
    Ok(tally.finish(suite, (m, n), None))
}

pub fn render_text(reports: &[SuiteReport]) -> String {
    let mut s = String::new();
    for r in reports {
        let status = if r.passed_all() { "PASS" } else { "FAIL" };
        let note = r
            .note
            .as_deref()
            .map(|n| format!("; {n}"))
            .unwrap_or_default();
        s += &format!(
            "{status} {} {}x{} ({}/{}{note})\n",
            r.suite.name(),
            r.size.0,
            r.size.1,
            r.passed,
            r.checks
        );
        for f in &r.failures {
            s += &format!("  {f}\n");
        }
    }
    let failed = reports.iter().filter(|r| !r.passed_all()).count();
    if failed == 0 {
        s += "all suites passed\n";
    } else {
        s += &format!("{failed} of {} suite runs failed\n", reports.len());
    }
    s
}

pub fn render_json(reports: &[SuiteReport], cfg: &RunConfig) -> String {
    let items: Vec<String> = reports
        .iter()
        .map(|r| {
            let failures: Vec<String> = r.failures.iter().map(|f| json::string(f)).collect();
            json::object(&[
                ("suite", json::string(r.suite.name())),
                ("size", json::string(&format!("{}x{}", r.size.0, r.size.1))),
                ("checks", r.checks.to_string()),
                ("passed", r.passed.to_string()),
                ("failures", format!("[{}]", failures.join(","))),
                (
                    "note",
                    r.note.as_deref().map_or("null".into(), json::string),
                ),
            ])
        })
        .collect();
    json::object(&[
        ("seed", cfg.seed.to_string()),
        ("trials", cfg.trials.to_string()),
        ("tol", json::num(cfg.tol)),
        ("suites", format!("[{}]", items.join(","))),
        (
            "all_passed",
            reports.iter().all(SuiteReport::passed_all).to_string(),
        ),
    ])
}
