use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::linalg::{c, DensityMatrix, Ket, Operator, Vector, C64};
use crate::propagate::Channel;

pub const DEFAULT_GRID_POINTS: usize = 1001;
pub const DEFAULT_TWO_QUBIT_GRID: (usize, usize) = (101, 101);

/// `points` uniform angles over `[0, 2π]`, both ends included.
pub fn theta_grid(points: usize) -> Vec<f64> {
    crate::quadrature::uniform_nodes(0.0, TAU, points).collect()
}

fn check_grid(points: usize) -> Result<()> {
    if points < 2 {
        return Err(Error::Config(format!("grid needs at least 2 points, got {points}")));
    }
    Ok(())
}

/// `⟨ψ_out| E(|ψ_in⟩⟨ψ_in|) |ψ_out⟩` for `ψ_in` given in input-subspace coordinates.
fn overlap(channel: &Channel, input: &[f64], output: &Vector) -> f64 {
    let n = input.len();
    let mut acc = c(0.0, 0.0);
    for a in 0..n {
        if input[a] == 0.0 {
            continue;
        }
        for b in 0..n {
            if input[b] == 0.0 {
                continue;
            }
            let m = channel.image(a, b);
            let mut e = c(0.0, 0.0);
            for j in 0..m.ncols() {
                let oj = output[j];
                if oj.norm_sqr() == 0.0 {
                    continue;
                }
                let mut col = c(0.0, 0.0);
                for i in 0..m.nrows() {
                    col += output[i].conj() * m[(i, j)];
                }
                e += col * oj;
            }
            acc += e * (input[a] * input[b]);
        }
    }
    acc.re
}

fn embedded_output(channel: &Channel, target: &Operator, input: &[f64]) -> Vector {
    let local: Vector = target * Vector::from_iterator(input.len(), input.iter().map(|&x| c(x, 0.0)));
    let mut out = Vector::zeros(channel.dim());
    for (k, &idx) in channel.inputs().iter().enumerate() {
        out[idx] = local[k];
    }
    let norm = out.norm();
    out / C64::new(norm, 0.0)
}

fn check_target(channel: &Channel, target: &Operator) -> Result<()> {
    if target.nrows() != channel.inputs().len() || !target.is_square() {
        return Err(Error::InvalidDimension(format!(
            "target is {:?} but the channel has {} input states",
            target.shape(),
            channel.inputs().len()
        )));
    }
    Ok(())
}

/// Mean of `⟨ψ_τ|E(|ψ⟩⟨ψ|)|ψ_τ⟩` over `ψ = cos θ|0⟩ + sin θ|1⟩`, `θ` on a uniform grid
/// over `[0, 2π]`, with `ψ_τ = target·ψ`. The qubit lives on the channel's input indices.
pub fn gate_fidelity(channel: &Channel, target: &Operator, grid_points: usize) -> Result<f64> {
    check_grid(grid_points)?;
    check_target(channel, target)?;
    if target.nrows() != 2 {
        return Err(Error::InvalidDimension("single-qubit fidelity needs a 2×2 target".into()));
    }
    let grid = theta_grid(grid_points);
    let sum: f64 = grid
        .iter()
        .map(|&th| {
            let input = [th.cos(), th.sin()];
            overlap(channel, &input, &embedded_output(channel, target, &input))
        })
        .sum();
    Ok(sum / grid.len() as f64)
}

/// Same average as [`gate_fidelity`], evolving each grid state separately through
/// `evolve`, which maps an input density matrix to the output one.
pub fn gate_fidelity_direct<F>(evolve: F, dim: usize, inputs: &[usize], target: &Operator, grid_points: usize) -> Result<f64>
where
    F: Fn(&DensityMatrix) -> Result<DensityMatrix>,
{
    check_grid(grid_points)?;
    let mut sum = 0.0;
    for th in theta_grid(grid_points) {
        let mut psi = Vector::zeros(dim);
        psi[inputs[0]] = c(th.cos(), 0.0);
        psi[inputs[1]] = c(th.sin(), 0.0);
        let local = target * Vector::from_column_slice(&[c(th.cos(), 0.0), c(th.sin(), 0.0)]);
        let mut out = Vector::zeros(dim);
        out[inputs[0]] = local[0];
        out[inputs[1]] = local[1];
        let rho = evolve(&DensityMatrix::pure(&Ket::new(psi)?))?;
        sum += state_fidelity(&rho, &Ket::normalized(out)?);
    }
    Ok(sum / grid_points as f64)
}

/// Mean fidelity over product states `(cos θ₁|0⟩ + sin θ₁|1⟩) ⊗ (cos θ₂|0⟩ + sin θ₂|1⟩)`.
/// The channel inputs are the four computational indices in `|00⟩, |01⟩, |10⟩, |11⟩` order.
pub fn two_qubit_gate_fidelity(channel: &Channel, target: &Operator, grid: (usize, usize)) -> Result<f64> {
    check_grid(grid.0)?;
    check_grid(grid.1)?;
    check_target(channel, target)?;
    if target.nrows() != 4 {
        return Err(Error::InvalidDimension("two-qubit fidelity needs a 4×4 target".into()));
    }
    let (g1, g2) = (theta_grid(grid.0), theta_grid(grid.1));
    let mut sum = 0.0;
    for &t1 in &g1 {
        let (s1, c1) = t1.sin_cos();
        for &t2 in &g2 {
            let (s2, c2) = t2.sin_cos();
            let input = [c1 * c2, c1 * s2, s1 * c2, s1 * s2];
            sum += overlap(channel, &input, &embedded_output(channel, target, &input));
        }
    }
    Ok(sum / (g1.len() * g2.len()) as f64)
}

/// `⟨ψ|ρ|ψ⟩`.
pub fn state_fidelity(rho: &DensityMatrix, psi: &Ket) -> f64 {
    let v = psi.amplitudes();
    (v.adjoint() * rho.entries() * v)[(0, 0)].re
}
