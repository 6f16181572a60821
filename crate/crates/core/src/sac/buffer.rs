use rand::Rng;

use crate::nn::Matrix;

/// One environment step as stored for replay and classifier training.
/// Observations are the network features of the states (see `Env::observe`).
#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    pub obs: Vec<f64>,
    /// Executed source action.
    pub a_src: Vec<f64>,
    /// Predicted target action; equal to `a_src` for single-action agents.
    pub a_tgt: Vec<f64>,
    /// Task reward plus any reward adjustment.
    pub reward: f64,
    pub next_obs: Vec<f64>,
    pub done: bool,
}

/// Which stored action a batch exposes to the learner.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ActionSelect {
    Src,
    Tgt,
    /// `[a_src | a_tgt]`
    Dual,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransitionBatch {
    pub obs: Matrix,
    pub actions: Matrix,
    pub rewards: Vec<f64>,
    pub next_obs: Matrix,
    pub dones: Vec<bool>,
}

impl TransitionBatch {
    pub fn len(&self) -> usize {
        self.rewards.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rewards.is_empty()
    }

    pub fn from_transitions(items: &[Transition], which: ActionSelect) -> Self {
        let obs_dim = items.first().map_or(0, |t| t.obs.len());
        let mut obs = Vec::new();
        let mut actions = Vec::new();
        let mut next_obs = Vec::new();
        for t in items {
            obs.extend_from_slice(&t.obs);
            next_obs.extend_from_slice(&t.next_obs);
            match which {
                ActionSelect::Src => actions.extend_from_slice(&t.a_src),
                ActionSelect::Tgt => actions.extend_from_slice(&t.a_tgt),
                ActionSelect::Dual => {
                    actions.extend_from_slice(&t.a_src);
                    actions.extend_from_slice(&t.a_tgt);
                }
            }
        }
        let n = items.len();
        let act_w = actions.len().checked_div(n).unwrap_or(0);
        Self {
            obs: Matrix::from_vec(n, obs_dim, obs),
            actions: Matrix::from_vec(n, act_w, actions),
            rewards: items.iter().map(|t| t.reward).collect(),
            next_obs: Matrix::from_vec(n, obs_dim, next_obs),
            dones: items.iter().map(|t| t.done).collect(),
        }
    }
}

/// Fixed-capacity ring of transitions stored column-wise.
#[derive(Debug, Clone)]
pub struct ReplayBuffer {
    capacity: usize,
    obs_dim: usize,
    action_dim: usize,
    len: usize,
    next: usize,
    obs: Vec<f64>,
    a_src: Vec<f64>,
    a_tgt: Vec<f64>,
    rewards: Vec<f64>,
    next_obs: Vec<f64>,
    dones: Vec<bool>,
}

impl ReplayBuffer {
    pub fn new(capacity: usize, obs_dim: usize, action_dim: usize) -> Self {
        assert!(capacity > 0, "replay capacity must be positive");
        Self {
            capacity,
            obs_dim,
            action_dim,
            len: 0,
            next: 0,
            obs: Vec::new(),
            a_src: Vec::new(),
            a_tgt: Vec::new(),
            rewards: Vec::new(),
            next_obs: Vec::new(),
            dones: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn push(&mut self, t: &Transition) {
        assert_eq!(t.obs.len(), self.obs_dim, "observation width mismatch");
        assert_eq!(t.next_obs.len(), self.obs_dim, "observation width mismatch");
        assert_eq!(t.a_src.len(), self.action_dim, "a_src width mismatch");
        assert_eq!(t.a_tgt.len(), self.action_dim, "a_tgt width mismatch");
        if self.len < self.capacity {
            self.obs.extend_from_slice(&t.obs);
            self.a_src.extend_from_slice(&t.a_src);
            self.a_tgt.extend_from_slice(&t.a_tgt);
            self.rewards.push(t.reward);
            self.next_obs.extend_from_slice(&t.next_obs);
            self.dones.push(t.done);
            self.len += 1;
        } else {
            let i = self.next;
            let (o, a) = (self.obs_dim, self.action_dim);
            self.obs[i * o..(i + 1) * o].copy_from_slice(&t.obs);
            self.a_src[i * a..(i + 1) * a].copy_from_slice(&t.a_src);
            self.a_tgt[i * a..(i + 1) * a].copy_from_slice(&t.a_tgt);
            self.rewards[i] = t.reward;
            self.next_obs[i * o..(i + 1) * o].copy_from_slice(&t.next_obs);
            self.dones[i] = t.done;
        }
        self.next = (self.next + 1) % self.capacity;
    }

    pub fn get(&self, i: usize) -> Transition {
        assert!(i < self.len, "replay index out of range");
        let (o, a) = (self.obs_dim, self.action_dim);
        Transition {
            obs: self.obs[i * o..(i + 1) * o].to_vec(),
            a_src: self.a_src[i * a..(i + 1) * a].to_vec(),
            a_tgt: self.a_tgt[i * a..(i + 1) * a].to_vec(),
            reward: self.rewards[i],
            next_obs: self.next_obs[i * o..(i + 1) * o].to_vec(),
            done: self.dones[i],
        }
    }

    /// Uniform indices with replacement.
    pub fn sample_indices<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<usize> {
        assert!(self.len > 0, "cannot sample from an empty replay buffer");
        (0..n).map(|_| rng.random_range(0..self.len)).collect()
    }

    pub fn sample<R: Rng + ?Sized>(
        &self,
        n: usize,
        which: ActionSelect,
        rng: &mut R,
    ) -> TransitionBatch {
        let idx = self.sample_indices(n, rng);
        self.gather(&idx, which)
    }

    pub fn gather(&self, idx: &[usize], which: ActionSelect) -> TransitionBatch {
        let (o, a) = (self.obs_dim, self.action_dim);
        let act_w = if which == ActionSelect::Dual {
            2 * a
        } else {
            a
        };
        let n = idx.len();
        let mut obs = Vec::with_capacity(n * o);
        let mut next_obs = Vec::with_capacity(n * o);
        let mut actions = Vec::with_capacity(n * act_w);
        let mut rewards = Vec::with_capacity(n);
        let mut dones = Vec::with_capacity(n);
        for &i in idx {
            obs.extend_from_slice(&self.obs[i * o..(i + 1) * o]);
            next_obs.extend_from_slice(&self.next_obs[i * o..(i + 1) * o]);
            match which {
                ActionSelect::Src => actions.extend_from_slice(&self.a_src[i * a..(i + 1) * a]),
                ActionSelect::Tgt => actions.extend_from_slice(&self.a_tgt[i * a..(i + 1) * a]),
                ActionSelect::Dual => {
                    actions.extend_from_slice(&self.a_src[i * a..(i + 1) * a]);
                    actions.extend_from_slice(&self.a_tgt[i * a..(i + 1) * a]);
                }
            }
            rewards.push(self.rewards[i]);
            dones.push(self.dones[i]);
        }
        TransitionBatch {
            obs: Matrix::from_vec(n, o, obs),
            actions: Matrix::from_vec(n, act_w, actions),
            rewards,
            next_obs: Matrix::from_vec(n, o, next_obs),
            dones,
        }
    }
}
