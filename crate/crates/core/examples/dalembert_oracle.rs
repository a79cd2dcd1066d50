//! Undamped solver output against the reflected d'Alembert formula.

use std::path::Path;

use dampwave::cli::oracle_errors;
use dampwave::config::RunConfig;

pub fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (wall, preset) in [("dirichlet", "standing"), ("dirichlet", "mixed"), ("neumann", "cosine")] {
        let text = format!(
            "n_cells = 400\nt_final = 4\ndamping.preset = zero\nboundary.kind = {wall}\ninitial.preset = {preset}\n"
        );
        let cfg = RunConfig::parse(&text, Path::new("."))?;
        let rows = oracle_errors(&cfg).map_err(|e| format!("{e:?}"))?;
        println!("{wall} / {preset}");
        for r in rows {
            println!(
                "  t = {:3}  |u| err = {:.2e} at x = {:.4}  |u_t| err = {:.1e}  |u_x| err = {:.1e}",
                r.t, r.u_error, r.worst_x, r.ut_error, r.ux_error
            );
        }
    }
    Ok(())
}
