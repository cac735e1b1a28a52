//! Cross-module integration: the full train-then-decode loop on synthetic
//! corpora.

use oidct::codec::{decode, encode, extract_training_pairs};
use oidct::learner::{solve_kernel, stationarity_residual, TrainingAccumulator};
use oidct::metrics::psnr_rgb;
use oidct::transform::{inverse_transform, KernelMatrix};
use oidct_testkit::synth::{corpus, CorpusKind};

#[test]
fn learned_kernel_never_loses_to_standard_on_training_data() {
    // Least-squares optimality, measured in the level-shifted luma domain
    // before any clamping, with lambda = 0.
    let images = corpus(CorpusKind::Photo, 500, 2, 128, 96);
    for qf in [30u8, 60, 90] {
        let mut acc = TrainingAccumulator::<f64>::new();
        let mut pairs = Vec::new();
        for img in &images {
            for pair in extract_training_pairs(img, qf).unwrap() {
                acc.accumulate(&pair.0, &pair.1);
                pairs.push(pair);
            }
        }
        let trained = solve_kernel(&acc, qf, 0.0).unwrap();
        let standard = KernelMatrix::<f64>::standard_inverse();

        let sse = |kernel: &KernelMatrix<f64>| -> f64 {
            pairs
                .iter()
                .map(|(p, d)| {
                    let recon = inverse_transform(kernel, d).unwrap();
                    (0..64).map(|i| (p.0[i] - recon.0[i]).powi(2)).sum::<f64>()
                })
                .sum()
        };
        let learned_sse = sse(trained.kernel());
        let standard_sse = sse(&standard);
        assert!(
            learned_sse <= standard_sse + 1e-6,
            "qf={qf}: learned {learned_sse} vs standard {standard_sse}"
        );
    }
}

#[test]
fn trained_kernels_satisfy_stationarity() {
    let images = corpus(CorpusKind::Photo, 520, 2, 128, 96);
    for qf in [10u8, 50, 90] {
        let mut acc = TrainingAccumulator::<f64>::new();
        for img in &images {
            for (p, d) in extract_training_pairs(img, qf).unwrap() {
                acc.accumulate(&p, &d);
            }
        }
        let lambda = acc.default_ridge();
        let trained = solve_kernel(&acc, qf, lambda).unwrap();
        let residual = stationarity_residual(&acc, &trained);
        assert!(residual < 1e-6, "qf={qf}: residual {residual}");
    }
}

#[test]
fn near_lossless_training_approaches_the_transpose() {
    // Small-corpus smoke version of the convergence property: at qf = 100
    // the channel is a pure rounding and the fit drifts toward K^T.
    let images = corpus(CorpusKind::Photo, 540, 2, 256, 192);
    let mut acc = TrainingAccumulator::<f64>::new();
    for img in &images {
        for (p, d) in extract_training_pairs(img, 100).unwrap() {
            acc.accumulate(&p, &d);
        }
    }
    assert!(acc.count() >= 1_000);
    let trained = solve_kernel(&acc, 100, 0.0).unwrap();
    let transpose = KernelMatrix::<f64>::standard_inverse();
    let rel = trained
        .kernel()
        .entries()
        .sub(transpose.entries())
        .frobenius_norm()
        / transpose.entries().frobenius_norm();
    assert!(rel < 0.1, "relative deviation {rel}");
}

#[test]
fn diagnostic_gain_survey() {
    // Not an assertion-bearing test: prints the learned-vs-standard PSNR
    // gain per quality factor so corpus drift is easy to spot. Run with
    // --nocapture to see the table.
    let train = corpus(CorpusKind::Photo, 0, 8, 512, 384);
    let test = corpus(CorpusKind::Photo, 100, 3, 512, 384);
    for qf in [50u8, 70, 90] {
        let mut acc = TrainingAccumulator::<f64>::new();
        for img in &train {
            for (p, d) in extract_training_pairs(img, qf).unwrap() {
                acc.accumulate(&p, &d);
            }
        }
        let lambda = acc.default_ridge();
        let trained = solve_kernel(&acc, qf, lambda).unwrap();
        let standard = KernelMatrix::<f64>::standard_inverse();

        let mut gain_sum = 0.0;
        for img in &test {
            let enc = encode(img, qf).unwrap();
            let std_psnr = psnr_rgb(img, &decode(&enc, &standard).unwrap()).unwrap();
            let lrn_psnr = psnr_rgb(img, &decode(&enc, trained.kernel()).unwrap()).unwrap();
            gain_sum += lrn_psnr - std_psnr;
        }
        println!(
            "qf={qf} samples={} mean_gain={:+.4} dB",
            acc.count(),
            gain_sum / test.len() as f64
        );
    }
}
