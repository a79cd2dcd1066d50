//! Runs a sweep over the damping strength from a config file, the same way
//! the `sweep` command does.

use dampwave::cli::cmd_sweep;

pub fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join(format!("dampwave-sweep-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let cfg = dir.join("base.cfg");
    std::fs::write(&cfg, "n_cells = 100\nt_final = 40\ndamping.preset = indicator\n")?;
    let values: Vec<String> = ["0.5", "1", "2", "4", "8"].iter().map(|s| s.to_string()).collect();
    let code = cmd_sweep(&cfg, "lambda", &values, &dir.join("out"));
    println!("exit code {code}");
    print!("{}", std::fs::read_to_string(dir.join("out").join("summary.csv"))?);
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}
