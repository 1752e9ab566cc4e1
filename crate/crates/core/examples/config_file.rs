//! Experiment descriptions in the flat `key = value` format.

use immuno_opt::lab::{run_trials, ExperimentConfig};

fn main() -> immuno_opt::Result<()> {
    let text = "\
# Fast Opt-IA on a small Cliff
algo = opt-ia
benchmark = cliff
d = 4
n = 24, 32
gamma = inv_n_log2_sq
operator = phype_bm
mu = 1
dup = 1
tau = 2*n*ln(n)
trials = 8
budget = 200*n^2
seed = 17
";
    let config = ExperimentConfig::parse(text)?;
    println!("config hash {}", config.hash());
    for p in config.points()? {
        println!("n = {}: budget {}, tau {:?}", p.n(), p.budget, p.tau);
    }
    let table = run_trials(&config)?;
    print!("{}", table.to_csv_string());
    Ok(())
}
