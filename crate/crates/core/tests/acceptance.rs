//! Acceptance suite: end-to-end checks tying the solvers, generator, and
//! encoders together. Each test prints one `[PASS]` line with its measured
//! numbers (visible with `cargo test --test acceptance -- --nocapture`);
//! a failed assertion is the corresponding `[FAIL]`.

use std::time::Instant;

use smti_core::encode::{emit_asp, emit_instance, emit_lp, parse_instance};
use smti_core::exact::{branch_and_bound, brute_force};
use smti_core::gen::{derive_instance_seed, generate, GenParams};
use smti_core::heuristics::{deferred_acceptance, ga_solve, ltiu_solve, GaParams, LtiuParams};
use smti_core::stability::is_stable;
use smti_core::{Instance, Objective};

/// p1 grid 0.1..=0.8, p2 grid 0.1..=0.9, step 0.1.
fn p_grid() -> (Vec<f64>, Vec<f64>) {
    let p1: Vec<f64> = (1..=8).map(|i| i as f64 / 10.0).collect();
    let p2: Vec<f64> = (1..=9).map(|j| j as f64 / 10.0).collect();
    (p1, p2)
}

/// The small-instance corpus: n in 4..=7 across the full (p1, p2) grid,
/// `replicates` instances per cell, seeded reproducibly.
fn corpus(replicates: u64) -> Vec<(Instance, u64)> {
    let (p1s, p2s) = p_grid();
    let mut out = Vec::new();
    for n in 4..=7usize {
        for (i, &p1) in p1s.iter().enumerate() {
            for (j, &p2) in p2s.iter().enumerate() {
                for rep in 0..replicates {
                    let seed = derive_instance_seed(1_000 + n as u64, i as u64, j as u64, rep);
                    let inst = generate(&GenParams { n, p1, p2, seed }).unwrap();
                    out.push((inst, seed));
                }
            }
        }
    }
    out
}

#[test]
fn criterion_1_oracle_equivalence() {
    let start = Instant::now();
    let corpus = corpus(2);
    assert!(corpus.len() >= 500, "only {} instances", corpus.len());
    let mut comparisons = 0u64;
    for (inst, _) in &corpus {
        for objective in Objective::ALL {
            let bf = brute_force(inst, objective).unwrap();
            let bnb = branch_and_bound(inst, objective, 0);
            assert!(bnb.optimal, "branch and bound must certify on n <= 7");
            assert_eq!(
                bnb.cost,
                bf.cost,
                "cost mismatch on n={} objective {objective}",
                inst.n()
            );
            comparisons += 1;
        }
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs() < 300,
        "criterion 1 took {elapsed:?}, budget is 5 minutes"
    );
    println!(
        "[PASS] criterion 1: {} instances, {comparisons} cost comparisons, zero mismatches in {:.1}s",
        corpus.len(),
        elapsed.as_secs_f64()
    );
}

#[test]
fn criterion_2_stability_soundness() {
    let (p1s, p2s) = p_grid();
    let mut checks = 0u64;
    for round in 0..2_000u64 {
        let n = 4 + (round % 5) as usize; // 4..=8
        let p1 = p1s[(round % 8) as usize];
        let p2 = p2s[(round % 9) as usize];
        let seed = derive_instance_seed(77, round, 0, 0);
        let inst = generate(&GenParams { n, p1, p2, seed }).unwrap();

        let da = deferred_acceptance(&inst, seed);
        assert!(is_stable(&inst, &da), "da unstable at round {round}");
        let ltiu = ltiu_solve(
            &inst,
            &LtiuParams {
                step_limit: 150,
                random_walk_p: 0.2,
                seed,
            },
        );
        assert!(
            is_stable(&inst, &ltiu.matching),
            "ltiu unstable at round {round}"
        );
        let ga = ga_solve(
            &inst,
            &GaParams {
                population_size: 6,
                evolution_rounds: 15,
                crossover_p: 0.7,
                mutation_p: 0.2,
                seed,
            },
        );
        assert!(
            is_stable(&inst, &ga.matching),
            "ga unstable at round {round}"
        );
        let bnb = branch_and_bound(&inst, Objective::ALL[(round % 3) as usize], 0);
        assert!(
            is_stable(&inst, &bnb.matching),
            "bnb unstable at round {round}"
        );
        checks += 4;
    }
    for round in 0..700u64 {
        let n = 4 + (round % 3) as usize; // 4..=6
        let seed = derive_instance_seed(78, round, 0, 0);
        let inst = generate(&GenParams {
            n,
            p1: p1s[(round % 8) as usize],
            p2: p2s[(round % 9) as usize],
            seed,
        })
        .unwrap();
        for objective in Objective::ALL {
            let bf = brute_force(&inst, objective).unwrap();
            assert!(
                is_stable(&inst, &bf.matching),
                "bf unstable at round {round}"
            );
            checks += 1;
        }
    }
    assert!(checks >= 10_000);
    println!("[PASS] criterion 2: {checks} solver outputs checked stable, zero failures");
}

#[test]
fn criterion_3_heuristic_quality_bounds() {
    let corpus = corpus(1);
    let mut checked = 0u64;
    for (inst, seed) in &corpus {
        let optimum = branch_and_bound(inst, Objective::MaxCardinality, 0);
        assert!(optimum.optimal);
        let da = deferred_acceptance(inst, *seed);
        let ltiu = ltiu_solve(
            inst,
            &LtiuParams {
                step_limit: 300,
                random_walk_p: 0.2,
                seed: *seed,
            },
        );
        let ga = ga_solve(
            inst,
            &GaParams {
                population_size: 8,
                evolution_rounds: 25,
                crossover_p: 0.7,
                mutation_p: 0.2,
                seed: *seed,
            },
        );
        assert!(
            ltiu.cost <= optimum.cost,
            "ltiu {} beats the optimum {}",
            ltiu.cost,
            optimum.cost
        );
        assert!(
            ga.cost <= optimum.cost,
            "ga {} beats the optimum {}",
            ga.cost,
            optimum.cost
        );
        assert!(
            ga.cost >= da.matched_count() as i64,
            "ga {} below its deferred-acceptance seed {}",
            ga.cost,
            da.matched_count()
        );
        checked += 1;
    }
    println!("[PASS] criterion 3: heuristic bounds hold on {checked} instances, zero violations");
}

#[test]
fn criterion_4_local_search_slows_as_lists_shrink() {
    let mut means = Vec::new();
    for (p1_idx, p1) in [(0usize, 0.1), (7usize, 0.8)] {
        let mut total = 0.0;
        for rep in 0..10u64 {
            let seed = derive_instance_seed(4_242, p1_idx as u64, 4, rep);
            let inst = generate(&GenParams {
                n: 50,
                p1,
                p2: 0.5,
                seed,
            })
            .unwrap();
            let start = Instant::now();
            let _ = ltiu_solve(
                &inst,
                &LtiuParams {
                    step_limit: 5_000,
                    random_walk_p: 0.2,
                    seed,
                },
            );
            total += start.elapsed().as_secs_f64();
        }
        means.push(total / 10.0);
    }
    assert!(
        means[1] > means[0],
        "mean ltiu time at p1=0.8 ({:.3}s) not above p1=0.1 ({:.3}s)",
        means[1],
        means[0]
    );
    println!(
        "[PASS] criterion 4: mean ltiu wall time rises from {:.3}s (p1=0.1) to {:.3}s (p1=0.8)",
        means[0], means[1]
    );
}

#[test]
fn criterion_5_generator_statistics() {
    let n = 50usize;
    for (p1, p2) in [(0.3, 0.2), (0.5, 0.7)] {
        let mut entries = 0usize;
        let mut lists = 0usize;
        let mut tie_slots = 0usize;
        let mut ties = 0usize;
        let mut seed = 0u64;
        while entries < 100_000 {
            let inst = generate(&GenParams {
                n,
                p1,
                p2,
                seed: derive_instance_seed(5_000, (p1 * 10.0) as u64, (p2 * 10.0) as u64, seed),
            })
            .unwrap();
            seed += 1;
            for a in 0..n {
                for groups in [inst.man_groups(a), inst.woman_groups(a)] {
                    let len: usize = groups.iter().map(Vec::len).sum();
                    entries += len;
                    lists += 1;
                    tie_slots += len - 1;
                    ties += len - groups.len();
                }
            }
        }
        let mean_len = entries as f64 / lists as f64;
        let expected = n as f64 * (1.0 - p1);
        assert!(
            (mean_len - expected).abs() <= 0.04 * expected,
            "mean list length {mean_len} outside {expected} +/- 4%"
        );
        let tie_fraction = ties as f64 / tie_slots as f64;
        assert!(
            (tie_fraction - p2).abs() <= 0.02,
            "tie fraction {tie_fraction} outside {p2} +/- 0.02"
        );
        println!(
            "[PASS] criterion 5 (p1={p1}, p2={p2}): mean length {mean_len:.2} vs {expected:.2}, \
             tie fraction {tie_fraction:.3} vs {p2} over {entries} entries"
        );
    }
}

#[test]
fn criterion_6_determinism_across_runs() {
    let run = || {
        let mut instance_bytes = String::new();
        let mut emissions = String::new();
        let mut costs: Vec<i64> = Vec::new();
        for rep in 0..25u64 {
            let seed = derive_instance_seed(6_000, rep, 0, 0);
            let inst = generate(&GenParams {
                n: 4 + (rep % 6) as usize,
                p1: 0.3,
                p2: 0.4,
                seed,
            })
            .unwrap();
            instance_bytes.push_str(&emit_instance(&inst));
            emissions.push_str(&emit_asp(&inst, Some(Objective::Egalitarian)));
            emissions.push_str(&emit_lp(&inst, Objective::SexEqual));
            costs.push(
                ltiu_solve(
                    &inst,
                    &LtiuParams {
                        step_limit: 200,
                        random_walk_p: 0.2,
                        seed,
                    },
                )
                .cost,
            );
            costs.push(
                ga_solve(
                    &inst,
                    &GaParams {
                        population_size: 6,
                        evolution_rounds: 10,
                        crossover_p: 0.7,
                        mutation_p: 0.2,
                        seed,
                    },
                )
                .cost,
            );
            costs.push(branch_and_bound(&inst, Objective::MaxCardinality, 0).cost);
        }
        (instance_bytes, emissions, costs)
    };
    let first = run();
    let second = run();
    assert_eq!(first.0, second.0, "instance files differ between runs");
    assert_eq!(first.1, second.1, "asp/lp emissions differ between runs");
    assert_eq!(first.2, second.2, "solver costs differ between runs");
    println!(
        "[PASS] criterion 6: {} bytes of instances, {} bytes of emissions, {} solver costs identical across two runs",
        first.0.len(),
        first.1.len(),
        first.2.len()
    );
}

#[test]
fn criterion_7_round_trip_identity() {
    let mut count = 0;
    for rep in 0..1_000u64 {
        let seed = derive_instance_seed(7_000, rep, 0, 0);
        let inst = generate(&GenParams {
            n: 1 + (rep % 15) as usize,
            p1: (rep % 8) as f64 / 10.0,
            p2: (rep % 10) as f64 / 10.0,
            seed,
        })
        .unwrap();
        assert_eq!(
            parse_instance(&emit_instance(&inst)).unwrap(),
            inst,
            "rep {rep}"
        );
        count += 1;
    }
    println!("[PASS] criterion 7: parse(emit(..)) identity on {count} instances, zero failures");
}

#[test]
fn criterion_8_complete_strict_instances_reach_cardinality_n() {
    let mut checked = 0;
    for n in [10usize, 20] {
        for rep in 0..25u64 {
            let seed = derive_instance_seed(8_000 + n as u64, rep, 0, 0);
            let inst = generate(&GenParams {
                n,
                p1: 0.0,
                p2: 0.0,
                seed,
            })
            .unwrap();
            let report = branch_and_bound(&inst, Objective::MaxCardinality, 0);
            assert!(report.optimal);
            assert_eq!(report.cost, n as i64, "n={n} rep={rep}");
            checked += 1;
        }
    }
    println!("[PASS] criterion 8: max-cardinality optimum equals n on {checked} complete strict instances");
}
