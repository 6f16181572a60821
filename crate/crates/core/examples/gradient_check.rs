//! Compares MLP backprop against central finite differences.
//!
//! `cargo run --example gradient_check`

use dap::nn::{Activation, Mlp};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let net = Mlp::new(&[3, 8, 8, 2], Activation::Tanh, &mut rng).unwrap();
    let x: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
    // Loss L = y_0 − 2 y_1, so dL/dy = [1, −2].
    let c = [1.0, -2.0];
    let loss = |n: &Mlp| -> f64 {
        n.forward(&x)
            .unwrap()
            .iter()
            .zip(&c)
            .map(|(y, c)| y * c)
            .sum()
    };
    let (grads, input_grad) = net.backward(&x, &c).unwrap();

    let h = 1e-5;
    let mut worst = 0.0f64;
    for p in 0..net.num_params() {
        let mut plus = net.clone();
        plus.params_mut()[p] += h;
        let mut minus = net.clone();
        minus.params_mut()[p] -= h;
        let fd = (loss(&plus) - loss(&minus)) / (2.0 * h);
        worst = worst.max((fd - grads[p]).abs() / fd.abs().max(grads[p].abs()).max(1e-6));
    }
    println!(
        "{} parameters, max relative error {worst:.2e}",
        net.num_params()
    );
    println!("dL/dx = {input_grad:?}");
}
