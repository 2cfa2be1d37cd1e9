use gradcast_core::diffnet::{build_network, forward, input_gradient, Activation, ExitLayer, NetworkSpec};
use gradcast_core::linalg::{norm2, unit_or_zero};
use gradcast_core::rng::{stream_rng, uniform};
use nalgebra::{Cholesky, DMatrix};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let master: u64 = args[1].parse().unwrap();
    let d: usize = args[2].parse().unwrap();
    let n_train: usize = args[3].parse().unwrap();
    let shift_scale: f64 = args[4].parse().unwrap();
    let nets: u64 = args[5].parse().unwrap();
    let n_eval = 256usize;
    let lambda = 1.0f64;
    let mut resid_by_width = Vec::new();
    for &m in &[64usize, 256, 1024, 4096] {
        let mut resids = Vec::new();
        for net_seed in 0..nets {
            let spec = NetworkSpec {
                input_dim: d,
                embedding_width: m,
                hidden_widths: vec![64],
                output_dim: 1,
                activation: Activation::Tanh,
                frequency_scale: 1.0,
                seed: 1000 * (master + 1) + net_seed,
            };
            let net = build_network::<f64>(&spec).unwrap();
            let mut rng = stream_rng(master, net_seed); // common random numbers across widths
            let mut feats = Vec::new();
            let mut targs = Vec::new();
            for _ in 0..n_train {
                let x: Vec<f64> = (0..d).map(|_| uniform(&mut rng, -1.0, 1.0)).collect();
                let h = forward(&net, &x, ExitLayer::Layer(0)).unwrap().hidden_states[0].clone();
                let g = unit_or_zero(&input_gradient(&net, &x, 0).unwrap());
                feats.push(h);
                targs.push(g);
            }
            let p = m;
            let mut mean = vec![0.0; p];
            let mut std = vec![0.0; p];
            for f in &feats { for j in 0..p { mean[j] += f[j]; } }
            for v in mean.iter_mut() { *v /= n_train as f64; }
            for f in &feats { for j in 0..p { let z = f[j] - mean[j]; std[j] += z * z; } }
            for v in std.iter_mut() { *v = (*v / n_train as f64).sqrt().max(1e-8); }
            let phi = DMatrix::<f64>::from_fn(n_train, p + 1, |r, c| {
                if c == p { 1.0 } else { (feats[r][c] - mean[c]) / std[c] }
            });
            let g = DMatrix::<f64>::from_fn(n_train, d, |r, c| targs[r][c]);
            let gram = phi.transpose() * &phi + lambda * DMatrix::<f64>::identity(p + 1, p + 1);
            let rhs = phi.transpose() * &g;
            let coef = Cholesky::new(gram).unwrap().solve(&rhs);
            let shift: Vec<f64> = (0..d).map(|_| uniform(&mut rng, -shift_scale, shift_scale)).collect();
            let mut ratio_sum = 0.0;
            for _ in 0..n_eval {
                let x: Vec<f64> = (0..d).map(|i| uniform::<f64, _>(&mut rng, -1.0, 1.0) + shift[i]).collect();
                let h = forward(&net, &x, ExitLayer::Layer(0)).unwrap().hidden_states[0].clone();
                let gt = unit_or_zero(&input_gradient(&net, &x, 0).unwrap());
                let mut pred = vec![0.0; d];
                for c in 0..d {
                    let mut s = coef[(p, c)];
                    for j in 0..p { s += (h[j] - mean[j]) / std[j] * coef[(j, c)]; }
                    pred[c] = s;
                }
                let diff: Vec<f64> = pred.iter().zip(&gt).map(|(a, b)| a - b).collect();
                ratio_sum += norm2(&diff) / norm2(&gt).max(1e-12);
            }
            resids.push(ratio_sum / n_eval as f64);
        }
        let mean_resid = resids.iter().sum::<f64>() / resids.len() as f64;
        resid_by_width.push(mean_resid);
    }
    let mut inversions = 0;
    for i in 1..resid_by_width.len() {
        if resid_by_width[i] > resid_by_width[i - 1] { inversions += 1; }
    }
    let marks: Vec<String> = resid_by_width.iter().map(|r| format!("{r:.4}")).collect();
    println!("master={master} d={d} n={n_train} shift={shift_scale} nets={nets}: [{}] inversions={inversions}", marks.join(", "));
}
