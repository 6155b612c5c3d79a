// Parse a point-by-point CSV, report validation issues, and write it back.
//
//     cargo run --example ingest_validate [path/to/matches.csv]

use tennis_momentum::ingest::{parse_match_csv, parse_match_file, validate_log, write_match_csv, ColumnSchema};
use tennis_momentum::sim::{simulate_match, SimConfig};

fn main() -> tennis_momentum::Result<()> {
    let schema = ColumnSchema::default();
    let parsed = match std::env::args().nth(1) {
        Some(path) => parse_match_file(path.as_ref(), &schema)?,
        None => {
            // no file given: round-trip a simulated match through CSV
            let log = simulate_match(&SimConfig { best_of: 3, seed: 11, ..Default::default() })?;
            let mut csv = Vec::new();
            write_match_csv(std::slice::from_ref(&log), &mut csv)?;
            parse_match_csv(csv.as_slice(), &schema)?
        }
    };
    for w in &parsed.warnings {
        println!("warning: {}", w.message);
    }
    for log in &parsed.logs {
        let report = validate_log(log);
        println!(
            "{}: {} points, {} errors, {} warnings, winner {:?}",
            log.match_id,
            report.record_count,
            report.errors.len(),
            report.warnings.len(),
            log.match_winner()
        );
        for e in report.errors.iter().take(5) {
            println!("  row {} [{}] {}", e.row, e.rule, e.message);
        }
    }
    Ok(())
}
