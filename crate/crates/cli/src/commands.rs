//! Dispatch from a parsed command to its report.

use crate::config::{
    BlockCensusArgs, CharDistArgs, Command, PrimeWalkArgs, VerifyArgs, WalkExactArgs, WalkMcArgs,
    WeilCheckArgs,
};
use crate::report::{
    CensusRow, CharDistRow, CommandOutput, ExperimentReport, LawRow, PatternFractionRow,
    PrimeWalkRow, Verdict,
};
use crate::verify;
use charwalk_core::char_walk::{block_pattern_census, char_walk_distribution, PatternCensus};
use charwalk_core::error::Result;
use charwalk_core::exp_sums::{weil_bound_check, weil_sweep, TwistedSumSpec};
use charwalk_core::finite_field::{FpPolynomial, PrimeModulus};
use charwalk_core::prime_walk::{prime_walk_distribution, sieve_primes, sign_pattern_census};
use charwalk_core::walk_model::{
    occupation_variance_exact, occupation_variance_monte_carlo, step_law_exact,
};

/// Runs a command and assembles its report (wall time not yet set).
pub fn run(command: &Command) -> Result<ExperimentReport> {
    let (outputs, verdicts) = match command {
        Command::WalkExact(args) => walk_exact(args)?,
        Command::WalkMc(args) => walk_mc(args)?,
        Command::CharDist(args) => char_dist(args)?,
        Command::BlockCensus(args) => block_census(args)?,
        Command::PrimeWalk(args) => prime_walk(args)?,
        Command::WeilCheck(args) => weil_check(args)?,
        Command::Verify(args) => verify_cmd(args)?,
    };
    Ok(ExperimentReport::new(command.clone(), outputs, verdicts))
}

fn walk_exact(args: &WalkExactArgs) -> Result<(CommandOutput, Vec<Verdict>)> {
    let law = step_law_exact(args.kind.into(), args.k, args.m)?;
    let rows = law
        .probabilities
        .iter()
        .enumerate()
        .map(|(a, &probability)| LawRow {
            a: a as u64,
            probability,
        })
        .collect();
    Ok((
        CommandOutput::WalkExact {
            m: args.m,
            k: args.k,
            rows,
        },
        Vec::new(),
    ))
}

fn walk_mc(args: &WalkMcArgs) -> Result<(CommandOutput, Vec<Verdict>)> {
    let estimate =
        occupation_variance_monte_carlo(args.kind.into(), args.n, args.m, args.trials, args.seed)?;
    let exact = occupation_variance_exact(args.kind.into(), args.n, args.m)?;
    Ok((
        CommandOutput::WalkMc {
            estimate: estimate.mean,
            standard_error: estimate.standard_error,
            trials: estimate.trials,
            exact,
            abs_difference: (estimate.mean - exact).abs(),
        },
        Vec::new(),
    ))
}

fn char_dist(args: &CharDistArgs) -> Result<(CommandOutput, Vec<Verdict>)> {
    let modulus = PrimeModulus::new(args.p)?;
    let poly = FpPolynomial::from_signed(modulus, &args.poly)?;
    let dist = char_walk_distribution(&poly, args.m, args.stat.into())?;
    let uniform = 1.0 / args.m as f64;
    let rows = dist
        .counts
        .iter()
        .enumerate()
        .map(|(a, &count)| CharDistRow {
            a: a as u64,
            count,
            frequency: dist.frequency(a),
            deviation_from_uniform: dist.frequency(a) - uniform,
        })
        .collect();
    Ok((
        CommandOutput::CharDist {
            p: args.p,
            m: args.m,
            rows,
            variance_from_uniform: dist.variance_from_uniform(),
            max_abs_deviation: dist.max_abs_deviation_from_uniform(),
        },
        Vec::new(),
    ))
}

fn block_census(args: &BlockCensusArgs) -> Result<(CommandOutput, Vec<Verdict>)> {
    let modulus = PrimeModulus::new(args.p)?;
    let poly = FpPolynomial::from_signed(modulus, &args.poly)?;
    let census = block_pattern_census(&poly, args.block_len)?;
    let rows = (0..census.counts.len())
        .map(|pattern| CensusRow {
            pattern: PatternCensus::pattern_string(pattern, args.block_len),
            count: census.counts[pattern],
            expected: census.model_prediction,
            relative_deviation: census.relative_deviation(pattern),
        })
        .collect();
    let max_dev = census.max_abs_relative_deviation();
    let verdicts = vec![Verdict {
        criterion: "census-max-relative-deviation".into(),
        pass: max_dev <= args.tolerance,
        measured: max_dev,
        threshold: args.tolerance,
    }];
    Ok((
        CommandOutput::BlockCensus {
            p: args.p,
            block_len: args.block_len,
            rows,
            blocks_total: census.blocks_total,
            excluded_blocks: census.excluded_blocks,
            model_prediction: census.model_prediction,
            max_abs_relative_deviation: max_dev,
            within_advisory_regime: census.within_advisory_regime,
        },
        verdicts,
    ))
}

fn prime_walk(args: &PrimeWalkArgs) -> Result<(CommandOutput, Vec<Verdict>)> {
    let table = sieve_primes(args.limit)?;
    let result = prime_walk_distribution(&table, args.k, args.m)?;
    let rows = (0..args.m as usize)
        .map(|a| PrimeWalkRow {
            a: a as u64,
            count: result.distribution.counts[a],
            frequency: result.distribution.frequency(a),
            model_probability: result.model_law[a],
            abs_discrepancy: (result.distribution.frequency(a) - result.model_law[a]).abs(),
        })
        .collect();
    let mut verdicts = vec![Verdict {
        criterion: "prime-walk-model-gap".into(),
        pass: result.max_abs_discrepancy <= args.tolerance,
        measured: result.max_abs_discrepancy,
        threshold: args.tolerance,
    }];
    let pattern_rows = if args.patterns {
        let census = sign_pattern_census(&table, args.k)?;
        let expected = 1.0 / (1u64 << args.k) as f64;
        let rows: Vec<PatternFractionRow> = (0..census.counts.len())
            .map(|pattern| {
                let fraction = census.fraction(pattern);
                PatternFractionRow {
                    pattern: PatternCensus::pattern_string(pattern, args.k as u32),
                    count: census.counts[pattern],
                    fraction,
                    relative_deviation: fraction / expected - 1.0,
                }
            })
            .collect();
        let max_rel = rows
            .iter()
            .map(|r| r.relative_deviation.abs())
            .fold(0.0, f64::max);
        verdicts.push(Verdict {
            criterion: "pattern-max-relative-deviation".into(),
            pass: max_rel <= args.pattern_tolerance,
            measured: max_rel,
            threshold: args.pattern_tolerance,
        });
        Some(rows)
    } else {
        None
    };
    Ok((
        CommandOutput::PrimeWalk {
            limit: args.limit,
            k: args.k,
            m: args.m,
            rows,
            included_prime_count: result.included_prime_count,
            excluded_prime_count: result.excluded_prime_count,
            prime_count_to_limit: result.prime_count_to_limit,
            max_abs_discrepancy: result.max_abs_discrepancy,
            k_advisory_cap: result.k_advisory_cap,
            within_k_advisory: result.within_k_advisory,
            pattern_rows,
        },
        verdicts,
    ))
}

fn weil_check(args: &WeilCheckArgs) -> Result<(CommandOutput, Vec<Verdict>)> {
    if args.sweep {
        let report = weil_sweep(args.max_p)?;
        let verdicts = vec![Verdict {
            criterion: "weil-margin-nonnegative".into(),
            pass: report.all_nonnegative,
            measured: report.min_margin,
            threshold: 0.0,
        }];
        return Ok((
            CommandOutput::WeilSweep {
                max_p: report.max_p,
                checks: report.checks,
                min_margin: report.min_margin,
                min_margin_case: report.min_margin_case,
                all_nonnegative: report.all_nonnegative,
            },
            verdicts,
        ));
    }
    let p = args.p.expect("clap enforces --p without --sweep");
    let poly1 = args.poly1.as_ref().expect("clap enforces --poly1");
    let modulus = PrimeModulus::new(p)?;
    let p1 = FpPolynomial::from_signed(modulus, poly1)?;
    let p2 = match &args.poly2 {
        Some(coeffs) => FpPolynomial::from_signed(modulus, coeffs)?,
        None => FpPolynomial::zero(modulus),
    };
    let length = args.length.unwrap_or(p - args.start);
    let spec = TwistedSumSpec::new(p1, p2, args.start, length)?;
    let check = weil_bound_check(&spec)?;
    let verdicts = vec![Verdict {
        criterion: "weil-margin-nonnegative".into(),
        pass: check.margin >= 0.0,
        measured: check.margin,
        threshold: 0.0,
    }];
    Ok((
        CommandOutput::WeilSingle {
            p,
            degree_sum: spec.degree_sum(),
            interval_start: args.start,
            interval_length: length,
            value_re: check.value_re,
            value_im: check.value_im,
            modulus_of_sum: check.modulus_of_sum,
            bound: check.bound,
            margin: check.margin,
            complete: check.complete,
        },
        verdicts,
    ))
}

fn verify_cmd(args: &VerifyArgs) -> Result<(CommandOutput, Vec<Verdict>)> {
    let criteria = verify::run(args.level);
    let verdicts = criteria
        .iter()
        .map(|c| Verdict {
            criterion: c.id.clone(),
            pass: c.pass,
            measured: c.measured,
            threshold: c.threshold,
        })
        .collect();
    Ok((
        CommandOutput::Verify {
            level: args.level,
            criteria,
        },
        verdicts,
    ))
}
