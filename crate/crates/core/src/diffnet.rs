//! Toy differentiable networks.
//!
//! A network is a random sine--cosine feature embedding followed by dense
//! layers and a linear output head. Forward passes can exit early at any
//! layer (the embedding counts as layer 0), and the input gradient of a
//! single target logit is available both as a hand-derived reverse-mode pass
//! and as a central finite-difference oracle for checking it.
//!
//! Networks are immutable after construction; forward and gradient
//! evaluations may run concurrently from many threads. The number of
//! backward passes performed is tracked in an internal counter so callers
//! can assert that forward-only attack paths never touch the oracle.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{CoreError, Result};
use crate::linalg::{self, Mat};
use crate::rng::{standard_normal, stream_rng};
use crate::scalar::Scalar;

/// Activation for the dense layers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    Tanh,
    Relu,
    Erf,
}

impl Activation {
    #[inline]
    pub fn apply<T: Scalar>(self, a: T) -> T {
        match self {
            Activation::Tanh => a.tanh(),
            // Subgradient 0 at the kink.
            Activation::Relu => {
                if a > T::zero() {
                    a
                } else {
                    T::zero()
                }
            }
            Activation::Erf => a.erf(),
        }
    }

    /// Derivative evaluated at the preactivation.
    #[inline]
    pub fn derivative<T: Scalar>(self, a: T) -> T {
        match self {
            Activation::Tanh => {
                let t = a.tanh();
                T::one() - t * t
            }
            Activation::Relu => {
                if a > T::zero() {
                    T::one()
                } else {
                    T::zero()
                }
            }
            Activation::Erf => {
                // d/da erf(a) = 2/sqrt(pi) * exp(-a^2)
                let two_over_sqrt_pi = T::from_f64_lossy(std::f64::consts::FRAC_2_SQRT_PI);
                two_over_sqrt_pi * (-(a * a)).exp()
            }
        }
    }
}

/// Architecture plus sampling seed; fully determines a [`Network`].
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkSpec {
    pub input_dim: usize,
    pub embedding_width: usize,
    /// Widths of the dense layers (layer 1..=L). May be empty, in which case
    /// the output head reads the embedding directly.
    pub hidden_widths: Vec<usize>,
    pub output_dim: usize,
    pub activation: Activation,
    /// Standard deviation of the embedding frequencies.
    pub frequency_scale: f64,
    pub seed: u64,
}

impl NetworkSpec {
    pub fn validate(&self) -> Result<()> {
        if self.input_dim == 0 {
            return Err(CoreError::invalid("input_dim", "must be >= 1"));
        }
        if self.embedding_width == 0 {
            return Err(CoreError::invalid("embedding_width", "must be >= 1"));
        }
        if self.output_dim == 0 {
            return Err(CoreError::invalid("output_dim", "must be >= 1"));
        }
        if self.hidden_widths.iter().any(|&w| w == 0) {
            return Err(CoreError::invalid("hidden_widths", "widths must be >= 1"));
        }
        if !(self.frequency_scale > 0.0) {
            return Err(CoreError::invalid("frequency_scale", "must be > 0"));
        }
        Ok(())
    }
}

/// One dense layer; bias starts at zero.
#[derive(Debug, Clone)]
pub struct DenseLayer<T> {
    pub weight: Mat<T>,
    pub bias: Vec<T>,
}

/// Sampled network. `frequencies` is `m x d`; `cos_coeffs`/`sin_coeffs` are
/// the per-feature coefficient pair `(u_j, v_j)`.
#[derive(Debug)]
pub struct Network<T> {
    pub input_dim: usize,
    pub embedding_width: usize,
    pub activation: Activation,
    pub frequencies: Mat<T>,
    pub cos_coeffs: Vec<T>,
    pub sin_coeffs: Vec<T>,
    pub layers: Vec<DenseLayer<T>>,
    pub output_head: Mat<T>,
    backward_calls: AtomicU64,
}

/// Where a forward pass stops.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitLayer {
    /// Stop after computing hidden state `l` (0 is the embedding).
    Layer(usize),
    Full,
}

/// Hidden states (embedding first) and, for full passes, the logits.
#[derive(Debug, Clone)]
pub struct ForwardTrace<T> {
    pub hidden_states: Vec<Vec<T>>,
    pub logits: Option<Vec<T>>,
    pub exit_layer: ExitLayer,
}

impl<T: Scalar> ForwardTrace<T> {
    /// Hidden state at tap `l` (0 = embedding).
    pub fn hidden(&self, l: usize) -> Result<&[T]> {
        self.hidden_states
            .get(l)
            .map(|v| v.as_slice())
            .ok_or(CoreError::IndexOutOfRange {
                context: "ForwardTrace::hidden",
                index: l,
                limit: self.hidden_states.len(),
            })
    }
}

/// Sample a network from its spec. Dense weights (including the output head)
/// are i.i.d. Normal(0, 1/fan_in); coefficient pairs are standard normal.
pub fn build_network<T: Scalar>(spec: &NetworkSpec) -> Result<Network<T>> {
    spec.validate()?;
    let d = spec.input_dim;
    let m = spec.embedding_width;
    let mut rng = stream_rng(spec.seed, 0);

    let sigma = T::from_f64_lossy(spec.frequency_scale);
    let frequencies = Mat::from_fn(m, d, |_, _| standard_normal::<T, _>(&mut rng) * sigma);
    let mut cos_coeffs = Vec::with_capacity(m);
    let mut sin_coeffs = Vec::with_capacity(m);
    for _ in 0..m {
        cos_coeffs.push(standard_normal::<T, _>(&mut rng));
        sin_coeffs.push(standard_normal::<T, _>(&mut rng));
    }

    let mut layers = Vec::with_capacity(spec.hidden_widths.len());
    let mut fan_in = m;
    for &w in &spec.hidden_widths {
        let scale = T::from_f64_lossy(1.0 / (fan_in as f64).sqrt());
        let weight = Mat::from_fn(w, fan_in, |_, _| standard_normal::<T, _>(&mut rng) * scale);
        layers.push(DenseLayer {
            weight,
            bias: vec![T::zero(); w],
        });
        fan_in = w;
    }
    let scale = T::from_f64_lossy(1.0 / (fan_in as f64).sqrt());
    let output_head = Mat::from_fn(spec.output_dim, fan_in, |_, _| {
        standard_normal::<T, _>(&mut rng) * scale
    });

    Ok(Network {
        input_dim: d,
        embedding_width: m,
        activation: spec.activation,
        frequencies,
        cos_coeffs,
        sin_coeffs,
        layers,
        output_head,
        backward_calls: AtomicU64::new(0),
    })
}

impl<T: Scalar> Network<T> {
    /// Assemble a network from explicit parts (used for rigged test nets and
    /// coefficient rotations). Shapes are validated.
    pub fn from_parts(
        activation: Activation,
        frequencies: Mat<T>,
        cos_coeffs: Vec<T>,
        sin_coeffs: Vec<T>,
        layers: Vec<DenseLayer<T>>,
        output_head: Mat<T>,
    ) -> Result<Self> {
        let m = frequencies.rows();
        let d = frequencies.cols();
        if m == 0 || d == 0 {
            return Err(CoreError::invalid("frequencies", "must be nonempty"));
        }
        if cos_coeffs.len() != m || sin_coeffs.len() != m {
            return Err(CoreError::DimensionMismatch {
                context: "Network::from_parts coefficients",
                expected: m,
                got: cos_coeffs.len().min(sin_coeffs.len()),
            });
        }
        let mut fan_in = m;
        for layer in &layers {
            if layer.weight.cols() != fan_in {
                return Err(CoreError::DimensionMismatch {
                    context: "Network::from_parts layer fan-in",
                    expected: fan_in,
                    got: layer.weight.cols(),
                });
            }
            if layer.bias.len() != layer.weight.rows() {
                return Err(CoreError::DimensionMismatch {
                    context: "Network::from_parts layer bias",
                    expected: layer.weight.rows(),
                    got: layer.bias.len(),
                });
            }
            fan_in = layer.weight.rows();
        }
        if output_head.cols() != fan_in {
            return Err(CoreError::DimensionMismatch {
                context: "Network::from_parts output head",
                expected: fan_in,
                got: output_head.cols(),
            });
        }
        Ok(Network {
            input_dim: d,
            embedding_width: m,
            activation,
            frequencies,
            cos_coeffs,
            sin_coeffs,
            layers,
            output_head,
            backward_calls: AtomicU64::new(0),
        })
    }

    pub fn num_layers(&self) -> usize {
        self.layers.len()
    }

    pub fn output_dim(&self) -> usize {
        self.output_head.rows()
    }

    /// Width of the hidden state at tap `l` (0 = embedding).
    pub fn layer_width(&self, l: usize) -> Result<usize> {
        if l == 0 {
            Ok(self.embedding_width)
        } else if l <= self.layers.len() {
            Ok(self.layers[l - 1].weight.rows())
        } else {
            Err(CoreError::IndexOutOfRange {
                context: "layer_width",
                index: l,
                limit: self.layers.len(),
            })
        }
    }

    /// Total backward passes performed on this network so far.
    pub fn backward_calls(&self) -> u64 {
        self.backward_calls.load(Ordering::Relaxed)
    }

    /// Shift-equivalent network: rotating each coefficient pair by the phase
    /// `omega_j . c` makes `e(x + c)` of `self` equal `e(x)` of the result.
    pub fn rotate_coefficients(&self, c: &[T]) -> Result<Network<T>> {
        if c.len() != self.input_dim {
            return Err(CoreError::DimensionMismatch {
                context: "rotate_coefficients",
                expected: self.input_dim,
                got: c.len(),
            });
        }
        let m = self.embedding_width;
        let mut cos_coeffs = Vec::with_capacity(m);
        let mut sin_coeffs = Vec::with_capacity(m);
        for j in 0..m {
            let delta = linalg::dot(self.frequencies.row(j), c);
            let (s, co) = (delta.sin(), delta.cos());
            // [u'; v'] = R(delta) [u; v] with R = [[cos, sin], [-sin, cos]].
            cos_coeffs.push(self.cos_coeffs[j] * co + self.sin_coeffs[j] * s);
            sin_coeffs.push(-self.cos_coeffs[j] * s + self.sin_coeffs[j] * co);
        }
        Network::from_parts(
            self.activation,
            self.frequencies.clone(),
            cos_coeffs,
            sin_coeffs,
            self.layers.clone(),
            self.output_head.clone(),
        )
    }
}

/// Embedding features `e_j(x) = u_j cos(omega_j . x) + v_j sin(omega_j . x)`.
pub fn sincos_embed<T: Scalar>(net: &Network<T>, x: &[T]) -> Result<Vec<T>> {
    if x.len() != net.input_dim {
        return Err(CoreError::DimensionMismatch {
            context: "sincos_embed",
            expected: net.input_dim,
            got: x.len(),
        });
    }
    let m = net.embedding_width;
    let mut e = Vec::with_capacity(m);
    for j in 0..m {
        let phase = linalg::dot(net.frequencies.row(j), x);
        e.push(net.cos_coeffs[j] * phase.cos() + net.sin_coeffs[j] * phase.sin());
    }
    Ok(e)
}

/// Forward pass up to `exit_layer`, collecting every hidden state on the way.
pub fn forward<T: Scalar>(net: &Network<T>, x: &[T], exit_layer: ExitLayer) -> Result<ForwardTrace<T>> {
    let depth = match exit_layer {
        ExitLayer::Layer(l) => {
            if l > net.layers.len() {
                return Err(CoreError::IndexOutOfRange {
                    context: "forward exit_layer",
                    index: l,
                    limit: net.layers.len(),
                });
            }
            l
        }
        ExitLayer::Full => net.layers.len(),
    };
    let mut hidden_states = Vec::with_capacity(depth + 1);
    hidden_states.push(sincos_embed(net, x)?);
    for layer in net.layers.iter().take(depth) {
        let mut a = layer.weight.matvec(hidden_states.last().unwrap());
        for (av, &b) in a.iter_mut().zip(&layer.bias) {
            *av = net.activation.apply(*av + b);
        }
        hidden_states.push(a);
    }
    let logits = match exit_layer {
        ExitLayer::Full => Some(net.output_head.matvec(hidden_states.last().unwrap())),
        ExitLayer::Layer(_) => None,
    };
    Ok(ForwardTrace {
        hidden_states,
        logits,
        exit_layer,
    })
}

/// Target score `S(x, t)`: the single logit `z_t(x)`.
pub fn target_score<T: Scalar>(net: &Network<T>, x: &[T], target: usize) -> Result<T> {
    if target >= net.output_dim() {
        return Err(CoreError::IndexOutOfRange {
            context: "target_score",
            index: target,
            limit: net.output_dim(),
        });
    }
    let trace = forward(net, x, ExitLayer::Full)?;
    Ok(trace.logits.as_ref().expect("full forward has logits")[target])
}

/// Exact reverse-mode gradient of `target_score` with respect to the input,
/// including the path through the sine--cosine embedding.
pub fn input_gradient<T: Scalar>(net: &Network<T>, x: &[T], target: usize) -> Result<Vec<T>> {
    if x.len() != net.input_dim {
        return Err(CoreError::DimensionMismatch {
            context: "input_gradient",
            expected: net.input_dim,
            got: x.len(),
        });
    }
    if target >= net.output_dim() {
        return Err(CoreError::IndexOutOfRange {
            context: "input_gradient",
            index: target,
            limit: net.output_dim(),
        });
    }
    net.backward_calls.fetch_add(1, Ordering::Relaxed);

    // Forward, keeping phases and preactivations for the backward sweep.
    let m = net.embedding_width;
    let mut phases = Vec::with_capacity(m);
    let mut e = Vec::with_capacity(m);
    for j in 0..m {
        let phase = linalg::dot(net.frequencies.row(j), x);
        e.push(net.cos_coeffs[j] * phase.cos() + net.sin_coeffs[j] * phase.sin());
        phases.push(phase);
    }
    let mut preacts: Vec<Vec<T>> = Vec::with_capacity(net.layers.len());
    let mut h = e;
    for layer in &net.layers {
        let mut a = layer.weight.matvec(&h);
        for (av, &b) in a.iter_mut().zip(&layer.bias) {
            *av += b;
        }
        h = a.iter().map(|&v| net.activation.apply(v)).collect();
        preacts.push(a);
    }

    // Backward: delta starts as the head row for the target logit.
    let mut delta: Vec<T> = net.output_head.row(target).to_vec();
    for (layer, a) in net.layers.iter().zip(preacts.iter()).rev() {
        let scaled: Vec<T> = delta
            .iter()
            .zip(a)
            .map(|(&dv, &av)| dv * net.activation.derivative(av))
            .collect();
        delta = layer.weight.matvec_t(&scaled);
    }

    // Through the embedding: de_j/dx = (-u_j sin + v_j cos)(phase_j) * omega_j.
    let mut grad = vec![T::zero(); net.input_dim];
    for j in 0..m {
        let conj = -net.cos_coeffs[j] * phases[j].sin() + net.sin_coeffs[j] * phases[j].cos();
        let w = delta[j] * conj;
        if w != T::zero() {
            linalg::axpy(w, net.frequencies.row(j), &mut grad);
        }
    }
    Ok(grad)
}

/// Central finite differences of the target score, coordinatewise.
pub fn finite_diff_gradient<T: Scalar>(
    net: &Network<T>,
    x: &[T],
    target: usize,
    h: T,
) -> Result<Vec<T>> {
    if !(h > T::zero()) {
        return Err(CoreError::invalid("h", "step size must be > 0"));
    }
    let mut xp = x.to_vec();
    let mut grad = Vec::with_capacity(x.len());
    let two_h = h + h;
    for i in 0..x.len() {
        let xi = xp[i];
        xp[i] = xi + h;
        let up = target_score(net, &xp, target)?;
        xp[i] = xi - h;
        let down = target_score(net, &xp, target)?;
        xp[i] = xi;
        grad.push((up - down) / two_h);
    }
    Ok(grad)
}

/// Relative gradient-check discrepancy used by the certification suite:
/// `||g_exact - g_fd|| / max(||g_fd||, eps)`.
pub fn gradient_check_error<T: Scalar>(net: &Network<T>, x: &[T], target: usize, h: T) -> Result<T> {
    let exact = input_gradient(net, x, target)?;
    let fd = finite_diff_gradient(net, x, target, h)?;
    let diff: Vec<T> = exact.iter().zip(&fd).map(|(&a, &b)| a - b).collect();
    let denom = linalg::norm2(&fd).max(T::from_f64_lossy(1e-12));
    Ok(linalg::norm2(&diff) / denom)
}
