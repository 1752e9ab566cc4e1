//! One fast hypermutation of a OneMax parent, in both stopping flavours.

use immuno_opt::prelude::*;

fn main() -> immuno_opt::Result<()> {
    let n = 40;
    let onemax = Benchmark::one_max(n)?;
    let schedule = GammaPreset::InvLnN.schedule(n)?;
    println!(
        "n = {n}, gamma = {:.4}, expected evaluations per hypermutation = {:.3}",
        schedule.gamma(),
        schedule.expected_evaluations()
    );
    println!(
        "p(1..5) = {:?}",
        schedule.probabilities()[..5].iter().map(|p| (p * 1e4).round() / 1e4).collect::<Vec<_>>()
    );

    let mut rng = RandomSource::from_seed(1);
    let parent = random_bitstring(n, &mut rng)?;
    let fp = onemax.value(&parent);
    let mut eval = Counted::new(&onemax);

    let fcm = phype_fcm(&parent, fp, &mut eval, &schedule, ConstructiveMode::Gt, &mut rng);
    println!(
        "fcm: parent {} -> offspring {} after {} evaluations (constructive: {}, stopped at step {:?})",
        fp.value(),
        fcm.offspring_fitness.value(),
        fcm.evals_used,
        fcm.constructive_found,
        fcm.stop_step
    );

    let bm = phype_bm(&parent, fp, &mut eval, &schedule, &mut rng);
    println!(
        "bm:  parent {} -> offspring {} after {} evaluations, distance {}",
        fp.value(),
        bm.offspring_fitness.value(),
        bm.evals_used,
        hamming_distance(&parent, &bm.offspring)?
    );
    println!("objective calls: {}", eval.counter().count());
    Ok(())
}
