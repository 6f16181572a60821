use std::io::Write;
use std::path::Path;

/// One evaluation checkpoint of a training run.
///
/// Averages are taken over the environment steps since the previous row.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRow {
    pub step: usize,
    /// Undiscounted return in the target environment, deterministic actions.
    pub eval_return_mean: f64,
    pub eval_return_std: f64,
    /// Adjustment added to the stored rewards.
    pub delta_r_mean: f64,
    /// Ensemble-mean estimate at the executed action (diagnostic).
    pub delta_r_exec_mean: f64,
    pub sigma_mean: f64,
    /// `‖a_src − a_tgt‖` of the policy proposals.
    pub action_gap_mean: f64,
    pub critic_loss: f64,
    pub actor_loss: f64,
    pub alpha_loss: f64,
    pub alpha: f64,
    pub classifier_loss: f64,
}

pub const METRICS_HEADER: &str = "step,eval_return_mean,eval_return_std,delta_r_mean,delta_r_exec_mean,sigma_mean,action_gap_mean,critic_loss,actor_loss,alpha_loss,alpha,classifier_loss";

impl MetricsRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.step,
            self.eval_return_mean,
            self.eval_return_std,
            self.delta_r_mean,
            self.delta_r_exec_mean,
            self.sigma_mean,
            self.action_gap_mean,
            self.critic_loss,
            self.actor_loss,
            self.alpha_loss,
            self.alpha,
            self.classifier_loss
        )
    }

    pub fn is_finite(&self) -> bool {
        [
            self.eval_return_mean,
            self.eval_return_std,
            self.delta_r_mean,
            self.delta_r_exec_mean,
            self.sigma_mean,
            self.action_gap_mean,
            self.critic_loss,
            self.actor_loss,
            self.alpha_loss,
            self.alpha,
            self.classifier_loss,
        ]
        .iter()
        .all(|v| v.is_finite())
    }
}

pub fn metrics_csv(rows: &[MetricsRow]) -> String {
    let mut s = String::from(METRICS_HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&r.to_csv());
        s.push('\n');
    }
    s
}

pub fn write_metrics(rows: &[MetricsRow], path: &Path) -> std::io::Result<()> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(metrics_csv(rows).as_bytes())
}

/// Parses a file written by [`write_metrics`].
pub fn read_metrics(path: &Path) -> Result<Vec<MetricsRow>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut lines = text.lines();
    if lines.next() != Some(METRICS_HEADER) {
        return Err(format!("{}: unexpected header", path.display()));
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 12 {
                return Err(format!("line {}: expected 12 fields", i + 2));
            }
            let num = |k: usize| {
                f[k].parse::<f64>()
                    .map_err(|e| format!("line {}: field {k}: {e}", i + 2))
            };
            Ok(MetricsRow {
                step: f[0]
                    .parse()
                    .map_err(|e| format!("line {}: step: {e}", i + 2))?,
                eval_return_mean: num(1)?,
                eval_return_std: num(2)?,
                delta_r_mean: num(3)?,
                delta_r_exec_mean: num(4)?,
                sigma_mean: num(5)?,
                action_gap_mean: num(6)?,
                critic_loss: num(7)?,
                actor_loss: num(8)?,
                alpha_loss: num(9)?,
                alpha: num(10)?,
                classifier_loss: num(11)?,
            })
        })
        .collect()
}
