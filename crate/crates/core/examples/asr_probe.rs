use gradcast_core::diffnet::*;
use gradcast_core::linalg::{cosine, norm2, sgn, unit_or_zero};
use gradcast_core::rng::{standard_normal, stream_rng, uniform};
use nalgebra::{Cholesky, DMatrix};

fn argmax(v: &[f64]) -> usize {
    let mut bi = 0;
    for i in 1..v.len() { if v[i] > v[bi] { bi = i; } }
    bi
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let master: u64 = args[1].parse().unwrap();
    let tap: usize = args[2].parse().unwrap();
    let eps: f64 = args[3].parse().unwrap();
    let aug_k: usize = args[4].parse().unwrap();
    let d = 8usize;
    let c_classes = 4usize;
    let spec = NetworkSpec {
        input_dim: d,
        embedding_width: 128,
        hidden_widths: vec![96, 96, 96],
        output_dim: c_classes,
        activation: Activation::Tanh,
        frequency_scale: 0.7,
        seed: 500 + master,
    };
    let net = build_network::<f64>(&spec).unwrap();
    let mut rng = stream_rng(master, 1);
    // Gaussian mixture centers
    let n_comp = 6;
    let centers: Vec<Vec<f64>> = (0..n_comp)
        .map(|_| (0..d).map(|_| uniform(&mut rng, -1.0, 1.0)).collect())
        .collect();
    let mut draw = |rng: &mut rand_chacha::ChaCha8Rng| -> Vec<f64> {
        let k = (uniform::<f64, _>(rng, 0.0, n_comp as f64)) as usize % n_comp;
        (0..d).map(|i| centers[k][i] + 0.35 * standard_normal::<f64, _>(rng)).collect()
    };
    let target = 0usize;
    // training set for predictor
    let mut feats: Vec<Vec<f64>> = Vec::new();
    let mut targs: Vec<Vec<f64>> = Vec::new();
    let mut weights: Vec<f64> = Vec::new();
    let n_train = 512;
    for _ in 0..n_train {
        let mut x = draw(&mut rng);
        for k in 0..=aug_k {
            let tr = forward(&net, &x, ExitLayer::Layer(tap)).unwrap();
            let h = tr.hidden_states[tap].clone();
            let g = input_gradient(&net, &x, target).unwrap();
            feats.push(h);
            targs.push(unit_or_zero(&g));
            weights.push(0.9f64.powi(k as i32));
            if k < aug_k {
                for (xi, gi) in x.iter_mut().zip(&g) { *xi += eps * sgn(*gi); }
            }
        }
    }
    let p = feats[0].len();
    let n = feats.len();
    let mut mean = vec![0.0; p];
    let mut std = vec![0.0; p];
    for f in &feats { for j in 0..p { mean[j] += f[j]; } }
    for v in mean.iter_mut() { *v /= n as f64; }
    for f in &feats { for j in 0..p { let z = f[j] - mean[j]; std[j] += z * z; } }
    for v in std.iter_mut() { *v = (*v / n as f64).sqrt().max(1e-8); }
    let phi = DMatrix::<f64>::from_fn(n, p + 1, |r, c| {
        if c == p { 1.0 } else { (feats[r][c] - mean[c]) / std[c] }
    });
    let w = DMatrix::<f64>::from_diagonal(&nalgebra::DVector::from_iterator(n, weights.iter().copied()));
    let g = DMatrix::<f64>::from_fn(n, d, |r, c| targs[r][c]);
    let gram = phi.transpose() * &w * &phi + 1.0 * DMatrix::<f64>::identity(p + 1, p + 1);
    let rhs = phi.transpose() * &w * &g;
    let coef = Cholesky::new(gram).unwrap().solve(&rhs);
    let predict = |x: &[f64]| -> Vec<f64> {
        let tr = forward(&net, x, ExitLayer::Layer(tap)).unwrap();
        let h = &tr.hidden_states[tap];
        (0..d).map(|c| {
            let mut s = coef[(p, c)];
            for j in 0..p { s += (h[j] - mean[j]) / std[j] * coef[(j, c)]; }
            s
        }).collect()
    };
    // evaluation
    let mut n_eval = 0;
    let mut exact_succ = 0;
    let mut pred_succ = 0;
    let mut cos_sum = 0.0;
    while n_eval < 400 {
        let x = draw(&mut rng);
        let tr = forward(&net, &x, ExitLayer::Full).unwrap();
        if argmax(tr.logits.as_ref().unwrap()) == target { continue; }
        n_eval += 1;
        let ge = input_gradient(&net, &x, target).unwrap();
        let gp = predict(&x);
        cos_sum += cosine(&ge, &gp);
        let x_e: Vec<f64> = x.iter().zip(&ge).map(|(xi, gi)| xi + eps * sgn(*gi)).collect();
        let x_p: Vec<f64> = x.iter().zip(&gp).map(|(xi, gi)| xi + eps * sgn(*gi)).collect();
        if argmax(forward(&net, &x_e, ExitLayer::Full).unwrap().logits.as_ref().unwrap()) == target { exact_succ += 1; }
        if argmax(forward(&net, &x_p, ExitLayer::Full).unwrap().logits.as_ref().unwrap()) == target { pred_succ += 1; }
    }
    let (ae, ap) = (exact_succ as f64 / n_eval as f64, pred_succ as f64 / n_eval as f64);
    println!(
        "master={master} tap={tap} eps={eps} K={aug_k}: exact ASR={ae:.3} pred ASR={ap:.3} ratio={:.2} mean_cos={:.3}",
        ap / ae.max(1e-9), cos_sum / n_eval as f64
    );
}
