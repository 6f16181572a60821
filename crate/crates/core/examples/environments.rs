//! The two source/target pairs and the dual-action wrapper.
//!
//! `cargo run --example environments`

use dap::env::{make_dual, EnvId, EnvPair};

fn main() {
    for id in [EnvId::Pendulum, EnvId::PointMass] {
        let pair = EnvPair::new(id);
        let spec = pair.source.spec();
        println!(
            "{id}: state {} obs {} action {} horizon {}",
            spec.state_dim, spec.obs_dim, spec.action_dim, spec.max_episode_steps
        );
        println!("  source {:?}", spec.dynamics_params);
        println!("  target {:?}", pair.target.spec().dynamics_params);

        let s = pair.source.reset(7);
        let a = vec![0.5; spec.action_dim];
        let src = pair.source.step(&s, &a).unwrap();
        let tgt = pair.target.step(&s, &a).unwrap();
        println!(
            "  same (s, a): source s' {:.4?}, target s' {:.4?}",
            src.next_state, tgt.next_state
        );

        // Only the first half of a dual action reaches the simulator.
        let dual = make_dual(&pair.source);
        let mut both = a.clone();
        both.extend(vec![-1.0; spec.action_dim]);
        let d = dual.step(&s, &both).unwrap();
        assert_eq!(d.next_state, src.next_state);
        println!(
            "  dual step with a_tgt = −1 matches the plain step: {}",
            d.next_state == src.next_state
        );
    }

    // With injected Gaussian noise the transition densities are known in closed form.
    let pair = EnvPair::new(EnvId::PointMass).with_transition_noise(0.01);
    let s = pair.source.reset(1);
    let a = [1.0, 0.0];
    let s2 = pair.target.mean_next_state(&s, &a);
    let ratio = pair.target.transition_log_density(&s, &a, &s2)
        - pair.source.transition_log_density(&s, &a, &s2);
    println!("log p_target(s'|s,a) − log p_source(s'|s,a) for a target-mean s': {ratio:.2}");
}
