//! Time-dependent Hamiltonians, fixed-step RK4 propagation and Lindblad channels.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{c, hermiticity_error, identity, max_abs, Operator, C64};
use crate::linalg::DensityMatrix;

/// Default number of RK4 steps per gate.
pub const DEFAULT_STEPS: usize = 8192;

/// A time-dependent Hermitian operator in rad/µs. Time is local to the piece it drives.
pub trait Hamiltonian: Send + Sync {
    fn dim(&self) -> usize;
    fn at(&self, t: f64) -> Operator;
}

impl<T: Hamiltonian + ?Sized> Hamiltonian for Arc<T> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn at(&self, t: f64) -> Operator {
        (**self).at(t)
    }
}

/// Hamiltonian backed by a closure.
pub struct FnHamiltonian<F> {
    dim: usize,
    f: F,
}

impl<F: Fn(f64) -> Operator + Send + Sync> FnHamiltonian<F> {
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F: Fn(f64) -> Operator + Send + Sync> Hamiltonian for FnHamiltonian<F> {
    fn dim(&self) -> usize {
        self.dim
    }
    fn at(&self, t: f64) -> Operator {
        (self.f)(t)
    }
}

/// Time-independent Hamiltonian.
#[derive(Debug, Clone)]
pub struct ConstantHamiltonian(pub Operator);

impl Hamiltonian for ConstantHamiltonian {
    fn dim(&self) -> usize {
        self.0.nrows()
    }
    fn at(&self, _t: f64) -> Operator {
        self.0.clone()
    }
}

struct Shifted {
    inner: Arc<dyn Hamiltonian>,
    offset: f64,
}

impl Hamiltonian for Shifted {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn at(&self, t: f64) -> Operator {
        self.inner.at(t + self.offset)
    }
}

/// One contiguous piece of a schedule.
#[derive(Clone)]
pub struct Piece {
    pub duration: f64,
    pub hamiltonian: Arc<dyn Hamiltonian>,
}

/// Piecewise Hamiltonian; pieces are integrated in order and never interpolated across
/// boundaries.
#[derive(Clone)]
pub struct Schedule {
    pieces: Vec<Piece>,
    dim: usize,
}

impl Schedule {
    pub fn new(pieces: Vec<Piece>) -> Result<Self> {
        let dim = pieces
            .first()
            .map(|p| p.hamiltonian.dim())
            .ok_or_else(|| Error::Config("schedule has no pieces".into()))?;
        for p in &pieces {
            if p.hamiltonian.dim() != dim {
                return Err(Error::InvalidDimension("schedule pieces have different dimensions".into()));
            }
            if !p.duration.is_finite() || p.duration < 0.0 {
                return Err(Error::Config(format!("invalid piece duration {}", p.duration)));
            }
        }
        let s = Self { pieces, dim };
        if s.duration() <= 0.0 {
            return Err(Error::Config("schedule duration must be positive".into()));
        }
        Ok(s)
    }

    pub fn single(hamiltonian: impl Hamiltonian + 'static, duration: f64) -> Result<Self> {
        Self::new(vec![Piece { duration, hamiltonian: Arc::new(hamiltonian) }])
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn duration(&self) -> f64 {
        self.pieces.iter().map(|p| p.duration).sum()
    }

    /// Splits at global time `t` into the schedules for `[0, t]` and `[t, τ]`.
    pub fn split_at(&self, t: f64) -> Result<(Schedule, Schedule)> {
        let total = self.duration();
        if !(t > 0.0 && t < total) {
            return Err(Error::Domain { t, duration: total });
        }
        let (mut head, mut tail) = (Vec::new(), Vec::new());
        let mut start = 0.0;
        for p in &self.pieces {
            let end = start + p.duration;
            if end <= t {
                head.push(p.clone());
            } else if start >= t {
                tail.push(p.clone());
            } else {
                head.push(Piece { duration: t - start, hamiltonian: p.hamiltonian.clone() });
                tail.push(Piece {
                    duration: end - t,
                    hamiltonian: Arc::new(Shifted { inner: p.hamiltonian.clone(), offset: t - start }),
                });
            }
            start = end;
        }
        Ok((Schedule::new(head)?, Schedule::new(tail)?))
    }

    /// Steps per piece, proportional to duration, at least one for non-empty pieces.
    fn step_counts(&self, steps: usize) -> Result<Vec<usize>> {
        if steps == 0 {
            return Err(Error::Config("steps must be >= 1".into()));
        }
        let total = self.duration();
        let counts: Vec<usize> = self
            .pieces
            .iter()
            .map(|p| {
                if p.duration == 0.0 {
                    0
                } else {
                    ((steps as f64 * p.duration / total).round() as usize).max(1)
                }
            })
            .collect();
        for (p, &n) in self.pieces.iter().zip(&counts) {
            if n > 0 && p.duration / n as f64 <= 0.0 {
                return Err(Error::Config("step size underflow".into()));
            }
        }
        Ok(counts)
    }
}

fn checked_sample(h: &dyn Hamiltonian, t: f64) -> Result<Operator> {
    let m = h.at(t);
    if !m.is_square() || m.nrows() != h.dim() {
        return Err(Error::InvalidDimension(format!("Hamiltonian sample has shape {:?}", m.shape())));
    }
    let err = hermiticity_error(&m);
    if err > 1e-12 * max_abs(&m).max(1.0) || !err.is_finite() {
        return Err(Error::ContractViolation(format!("non-Hermitian Hamiltonian at t={t} (error {err:e})")));
    }
    Ok(m)
}

/// `out = base + a·slope`.
fn combine(out: &mut Operator, base: &Operator, a: f64, slope: &Operator) {
    for ((o, b), k) in out.iter_mut().zip(base.iter()).zip(slope.iter()) {
        *o = *b + *k * a;
    }
}

/// Classical RK4 over a block of matrices; `rhs(H, state, out)` receives the Hamiltonian
/// sample at the stage time. `observe(t, state)` runs at every step boundary.
fn integrate<R, O>(schedule: &Schedule, steps: usize, state: &mut [Operator], rhs: R, mut observe: O) -> Result<()>
where
    R: Fn(&Operator, &[Operator], &mut [Operator]),
    O: FnMut(f64, &[Operator]),
{
    let counts = schedule.step_counts(steps)?;
    let zero = || state.iter().map(|m| Operator::zeros(m.nrows(), m.ncols())).collect::<Vec<_>>();
    let (mut k1, mut k2, mut k3, mut k4, mut tmp) = (zero(), zero(), zero(), zero(), zero());
    let mut start = 0.0;
    observe(0.0, state);
    for (piece, &n) in schedule.pieces.iter().zip(&counts) {
        if n == 0 {
            continue;
        }
        let ham = piece.hamiltonian.as_ref();
        let h = piece.duration / n as f64;
        let mut h_start = checked_sample(ham, 0.0)?;
        for s in 0..n {
            let t = s as f64 * h;
            let h_mid = checked_sample(ham, t + 0.5 * h)?;
            let h_end = checked_sample(ham, if s + 1 == n { piece.duration } else { t + h })?;
            rhs(&h_start, state, &mut k1);
            for j in 0..state.len() {
                combine(&mut tmp[j], &state[j], 0.5 * h, &k1[j]);
            }
            rhs(&h_mid, &tmp, &mut k2);
            for j in 0..state.len() {
                combine(&mut tmp[j], &state[j], 0.5 * h, &k2[j]);
            }
            rhs(&h_mid, &tmp, &mut k3);
            for j in 0..state.len() {
                combine(&mut tmp[j], &state[j], h, &k3[j]);
            }
            rhs(&h_end, &tmp, &mut k4);
            for j in 0..state.len() {
                let slopes = k1[j].iter().zip(k2[j].iter()).zip(k3[j].iter()).zip(k4[j].iter());
                for (x, (((a, b), c3), d)) in state[j].iter_mut().zip(slopes) {
                    *x += (*a + *d) * (h / 6.0) + (*b + *c3) * (h / 3.0);
                }
            }
            h_start = h_end;
            let global = if s + 1 == n { start + piece.duration } else { start + t + h };
            observe(global, state);
        }
        start += piece.duration;
    }
    Ok(())
}

/// `U(τ)` solving `i dU/dt = H(t) U`, `U(0) = I`.
pub fn time_ordered_propagator(schedule: &Schedule, steps: usize) -> Result<Operator> {
    let mut state = vec![identity(schedule.dim())];
    integrate(
        schedule,
        steps,
        &mut state,
        |h, x, out| out[0].gemm(c(0.0, -1.0), h, &x[0], c(0.0, 0.0)),
        |_, _| {},
    )?;
    Ok(state.pop().expect("one block"))
}

/// A Lindblad dissipator term `rate · (2 b ρ b† − b†b ρ − ρ b†b)`.
#[derive(Debug, Clone)]
pub struct CollapseOp {
    pub rate: f64,
    pub op: Operator,
}

impl CollapseOp {
    pub fn new(rate: f64, op: Operator) -> Self {
        Self { rate, op }
    }
}

/// Nonzero `(row, col, value)` entries of a sparse operator.
type SparseEntries = Vec<(usize, usize, C64)>;

struct Dissipator {
    /// `K = Σ rate · b†b`, so the non-Hermitian generator is `H − iK`.
    damping: Operator,
    /// `(2·rate, nonzero entries of b)` per collapse operator.
    jumps: Vec<(f64, SparseEntries)>,
}

impl Dissipator {
    fn new(dim: usize, collapse: &[CollapseOp]) -> Result<Self> {
        let mut damping = Operator::zeros(dim, dim);
        let mut jumps = Vec::new();
        for op in collapse {
            if !op.rate.is_finite() || op.rate < 0.0 {
                return Err(Error::InvalidNoise(format!("rate {} must be finite and >= 0", op.rate)));
            }
            if op.op.shape() != (dim, dim) {
                return Err(Error::InvalidDimension(format!(
                    "collapse operator shape {:?} does not match dimension {dim}",
                    op.op.shape()
                )));
            }
            if op.rate == 0.0 {
                continue;
            }
            damping += op.op.adjoint() * &op.op * c(op.rate, 0.0);
            let entries = (0..dim)
                .flat_map(|i| (0..dim).map(move |k| (i, k)))
                .filter_map(|(i, k)| {
                    let v = op.op[(i, k)];
                    (v.norm() > 0.0).then_some((i, k, v))
                })
                .collect();
            jumps.push((2.0 * op.rate, entries));
        }
        Ok(Self { damping, jumps })
    }

    fn rhs(&self, h: &Operator, x: &[Operator], out: &mut [Operator]) {
        let heff = h - &self.damping * c(0.0, 1.0);
        let heff_dag = heff.adjoint();
        for (xj, oj) in x.iter().zip(out.iter_mut()) {
            oj.gemm(c(0.0, -1.0), &heff, xj, c(0.0, 0.0));
            oj.gemm(c(0.0, 1.0), xj, &heff_dag, c(1.0, 0.0));
            for (weight, entries) in &self.jumps {
                for &(i, k, v) in entries {
                    for &(l, m, w) in entries {
                        oj[(i, l)] += v * xj[(k, m)] * w.conj() * *weight;
                    }
                }
            }
        }
    }
}

/// Linear map on density matrices, stored by its action on `|a⟩⟨b|` for `a, b` in an
/// input subspace of computational indices.
#[derive(Debug, Clone)]
pub struct Channel {
    dim: usize,
    inputs: Vec<usize>,
    images: Vec<Operator>,
}

impl Channel {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn inputs(&self) -> &[usize] {
        &self.inputs
    }

    /// `E(|inputs[a]⟩⟨inputs[b]|)`.
    pub fn image(&self, a: usize, b: usize) -> &Operator {
        &self.images[a * self.inputs.len() + b]
    }

    /// Unitary conjugation channel restricted to `inputs`.
    pub fn from_unitary(u: &Operator, inputs: &[usize]) -> Self {
        let dim = u.nrows();
        let images = inputs
            .iter()
            .flat_map(|&a| inputs.iter().map(move |&b| (a, b)))
            .map(|(a, b)| u.column(a) * u.column(b).adjoint())
            .collect();
        Self { dim, inputs: inputs.to_vec(), images }
    }

    /// Applies the channel; entries of `rho` outside the input subspace are ignored.
    pub fn apply(&self, rho: &Operator) -> Operator {
        let n = self.inputs.len();
        let mut out = Operator::zeros(self.dim, self.dim);
        for a in 0..n {
            for b in 0..n {
                let w = rho[(self.inputs[a], self.inputs[b])];
                if w.norm() > 0.0 {
                    out += self.image(a, b) * w;
                }
            }
        }
        out
    }

    /// Follows the channel with conjugation by `u`.
    pub fn then_unitary(&self, u: &Operator) -> Self {
        let ud = u.adjoint();
        Self {
            dim: self.dim,
            inputs: self.inputs.clone(),
            images: self.images.iter().map(|m| u * m * &ud).collect(),
        }
    }

    fn require_full(&self) -> Result<()> {
        if self.inputs.len() != self.dim || self.inputs.iter().enumerate().any(|(i, &a)| i != a) {
            return Err(Error::InvalidDimension("operation needs a channel on the full space".into()));
        }
        Ok(())
    }

    /// Matrix `S` with `vec(E(ρ)) = S vec(ρ)`, column-stacking `vec`.
    pub fn superoperator(&self) -> Result<Operator> {
        self.require_full()?;
        let d = self.dim;
        let mut s = Operator::zeros(d * d, d * d);
        for a in 0..d {
            for b in 0..d {
                let img = self.image(a, b);
                let col = b * d + a;
                for j in 0..d {
                    for i in 0..d {
                        s[(j * d + i, col)] = img[(i, j)];
                    }
                }
            }
        }
        Ok(s)
    }

    /// Choi matrix `Σ_ab |a⟩⟨b| ⊗ E(|a⟩⟨b|)`.
    pub fn choi(&self) -> Result<Operator> {
        self.require_full()?;
        let d = self.dim;
        let mut m = Operator::zeros(d * d, d * d);
        for a in 0..d {
            for b in 0..d {
                m.view_mut((a * d, b * d), (d, d)).copy_from(self.image(a, b));
            }
        }
        Ok(m)
    }

    /// `max_ab |tr E(|a⟩⟨b|) − δ_ab|`.
    pub fn trace_error(&self) -> f64 {
        let n = self.inputs.len();
        let mut worst: f64 = 0.0;
        for a in 0..n {
            for b in 0..n {
                let expect = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((self.image(a, b).trace() - c(expect, 0.0)).norm());
            }
        }
        worst
    }
}

/// Full superoperator of the Lindblad evolution over the schedule.
pub fn superoperator_propagator(schedule: &Schedule, collapse: &[CollapseOp], steps: usize) -> Result<Channel> {
    let inputs: Vec<usize> = (0..schedule.dim()).collect();
    channel_on_subspace(schedule, collapse, &inputs, steps)
}

/// Lindblad channel evaluated only on operators supported by `inputs`.
pub fn channel_on_subspace(
    schedule: &Schedule,
    collapse: &[CollapseOp],
    inputs: &[usize],
    steps: usize,
) -> Result<Channel> {
    let dim = schedule.dim();
    check_inputs(inputs, dim)?;
    let diss = Dissipator::new(dim, collapse)?;
    let mut state = unit_images(inputs, dim);
    integrate(schedule, steps, &mut state, |h, x, out| diss.rhs(h, x, out), |_, _| {})?;
    Ok(Channel { dim, inputs: inputs.to_vec(), images: state })
}

fn check_inputs(inputs: &[usize], dim: usize) -> Result<()> {
    if inputs.is_empty() || inputs.iter().any(|&i| i >= dim) {
        return Err(Error::InvalidDimension(format!("input indices {inputs:?} invalid for dimension {dim}")));
    }
    Ok(())
}

/// `|a⟩⟨b|` for all input pairs, row-major in `(a, b)`.
fn unit_images(inputs: &[usize], dim: usize) -> Vec<Operator> {
    inputs
        .iter()
        .flat_map(|&a| inputs.iter().map(move |&b| (a, b)))
        .map(|(a, b)| {
            let mut m = Operator::zeros(dim, dim);
            m[(a, b)] = c(1.0, 0.0);
            m
        })
        .collect()
}

/// Integrates the master equation from `rho0`.
pub fn lindblad_evolve(
    schedule: &Schedule,
    rho0: &DensityMatrix,
    collapse: &[CollapseOp],
    steps: usize,
) -> Result<DensityMatrix> {
    let traj = lindblad_trajectory(schedule, rho0, collapse, steps, 1)?;
    Ok(traj.into_iter().last().expect("final sample").1)
}

/// Integrates the master equation and records `ρ(t)` on about `samples + 1` step
/// boundaries including both ends.
pub fn lindblad_trajectory(
    schedule: &Schedule,
    rho0: &DensityMatrix,
    collapse: &[CollapseOp],
    steps: usize,
    samples: usize,
) -> Result<Vec<(f64, DensityMatrix)>> {
    if rho0.dim() != schedule.dim() {
        return Err(Error::InvalidDimension(format!(
            "state dimension {} does not match Hamiltonian dimension {}",
            rho0.dim(),
            schedule.dim()
        )));
    }
    let diss = Dissipator::new(schedule.dim(), collapse)?;
    let mut sampler = Sampler::new(schedule, steps, samples)?;
    let mut state = vec![rho0.entries().clone()];
    let mut out = Vec::new();
    integrate(schedule, steps, &mut state, |h, x, o| diss.rhs(h, x, o), |t, s| {
        if sampler.hit() {
            out.push((t, DensityMatrix::from_evolved(s[0].clone())));
        }
    })?;
    Ok(out)
}

/// `U(t)` on about `samples + 1` step boundaries including both ends.
pub fn propagator_trajectory(schedule: &Schedule, steps: usize, samples: usize) -> Result<Vec<(f64, Operator)>> {
    let mut sampler = Sampler::new(schedule, steps, samples)?;
    let mut state = vec![identity(schedule.dim())];
    let mut out = Vec::new();
    integrate(
        schedule,
        steps,
        &mut state,
        |h, x, o| o[0].gemm(c(0.0, -1.0), h, &x[0], c(0.0, 0.0)),
        |t, s| {
            if sampler.hit() {
                out.push((t, s[0].clone()));
            }
        },
    )?;
    Ok(out)
}

/// Lindblad channel on `inputs` recorded on about `samples + 1` step boundaries
/// including both ends.
pub fn channel_trajectory(
    schedule: &Schedule,
    collapse: &[CollapseOp],
    inputs: &[usize],
    steps: usize,
    samples: usize,
) -> Result<Vec<(f64, Channel)>> {
    let dim = schedule.dim();
    check_inputs(inputs, dim)?;
    let diss = Dissipator::new(dim, collapse)?;
    let mut sampler = Sampler::new(schedule, steps, samples)?;
    let mut state = unit_images(inputs, dim);
    let mut out = Vec::new();
    integrate(schedule, steps, &mut state, |h, x, o| diss.rhs(h, x, o), |t, s| {
        if sampler.hit() {
            out.push((t, Channel { dim, inputs: inputs.to_vec(), images: s.to_vec() }));
        }
    })?;
    Ok(out)
}

/// Picks every `stride`-th step boundary plus the final one.
struct Sampler {
    stride: usize,
    total: usize,
    seen: usize,
}

impl Sampler {
    fn new(schedule: &Schedule, steps: usize, samples: usize) -> Result<Self> {
        let total: usize = schedule.step_counts(steps)?.iter().sum();
        Ok(Self { stride: (total / samples.max(1)).max(1), total, seen: 0 })
    }

    fn hit(&mut self) -> bool {
        let k = self.seen;
        self.seen += 1;
        k % self.stride == 0 || k == self.total
    }
}
