//! Command implementations behind the `conic-certify` binary.

pub mod certify_cmd;
pub mod selftest;
pub mod simulate;
pub mod sweep;

use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use conic_certify::instances::{fixture, InstanceBundle};

/// Environment variable capping the worker pool size.
pub const THREADS_ENV: &str = "CONIC_CERTIFY_THREADS";

/// Sizes the global rayon pool from [`THREADS_ENV`]. Later calls are no-ops.
pub fn configure_threads() {
    if let Some(n) = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global();
    }
}

/// Loads an instance file, or a built-in fixture (`z2:<n>`, `toy-lp`,
/// `toy-soc`) when the argument names one and no such file exists.
pub fn load_instance(arg: &str) -> Result<InstanceBundle> {
    if !Path::new(arg).exists() {
        if let Some(b) = fixture(arg)? {
            return Ok(b);
        }
    }
    InstanceBundle::load(arg).with_context(|| format!("loading instance {arg}"))
}

/// Reads whitespace- or comma-separated numbers.
pub fn read_point(path: &Path) -> Result<Vec<f64>> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>()
                .with_context(|| format!("bad number `{t}`"))
        })
        .collect()
}

/// Per-trial seed derived from `(seed, instance, trial)` by SplitMix64 mixing.
pub fn derive_seed(seed: u64, instance: u64, trial: u64) -> u64 {
    let mut z = seed
        .wrapping_add(instance.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(trial.wrapping_mul(0xD1B5_4A32_D192_ED03));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Writes `# key = value` lines, then the header and rows as CSV.
pub fn write_csv<W: Write>(
    mut out: W,
    meta: &[(String, String)],
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> Result<()> {
    for (k, v) in meta {
        writeln!(out, "# {k} = {v}")?;
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.flush()?;
    Ok(())
}

/// Shortest round-trip scientific form.
pub fn fmt_f(x: f64) -> String {
    format!("{x:e}")
}

/// Like [`fmt_f`]; missing values become `nan`.
pub fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "nan".to_string(), fmt_f)
}

/// Opens `path` for writing, or stdout when absent.
pub fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(std::io::BufWriter::new(
            std::fs::File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(std::io::stdout().lock()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_differ_by_trial_and_instance() {
        let a = derive_seed(1, 0, 0);
        assert_ne!(a, derive_seed(1, 0, 1));
        assert_ne!(a, derive_seed(1, 1, 0));
        assert_ne!(a, derive_seed(2, 0, 0));
        assert_eq!(a, derive_seed(1, 0, 0));
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        let meta = vec![("seed".to_string(), "3".to_string())];
        write_csv(
            &mut buf,
            &meta,
            &["a", "b"],
            [vec![fmt_f(0.5), fmt_opt(None)]],
        )
        .unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "# seed = 3\na,b\n5e-1,nan\n"
        );
    }

    #[test]
    fn point_parsing() {
        let dir = std::env::temp_dir().join(format!("cc-point-{}", std::process::id()));
        std::fs::write(&dir, "1, 2.5\n-3e-1").unwrap();
        assert_eq!(read_point(&dir).unwrap(), vec![1.0, 2.5, -0.3]);
        std::fs::write(&dir, "1 x").unwrap();
        assert!(read_point(&dir).is_err());
        let _ = std::fs::remove_file(&dir);
    }
}
