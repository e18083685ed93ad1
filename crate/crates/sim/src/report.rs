//! Turns `summary.csv` into one whitespace-separated `.dat` file per figure:
//! a `nodes` column followed by a mean and sd column for every protocol.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use crate::sweep::SweepError;

/// (file stem, summary column prefix)
pub const FIGURES: &[(&str, &str)] = &[
    ("energy_mean", "energy_mean_j"),
    ("energy_std", "energy_std_j"),
    ("delivery_ratio", "delivery_ratio"),
    ("routing_overhead", "routing_overhead"),
];

pub fn write_dat_files(
    summary_csv: &Path,
    out_dir: &Path,
) -> Result<Vec<std::path::PathBuf>, SweepError> {
    let mut rdr = csv::Reader::from_path(summary_csv)?;
    let headers = rdr.headers()?.clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let (Some(pi), Some(ni)) = (col("protocol"), col("nodes")) else {
        return Err(SweepError::Io(std::io::Error::new(
            std::io::ErrorKind::InvalidData,
            "summary is missing the protocol or nodes column",
        )));
    };
    let rows: Vec<csv::StringRecord> = rdr.records().collect::<Result<_, _>>()?;
    let mut protocols: Vec<String> = Vec::new();
    for r in &rows {
        if !protocols.iter().any(|p| p == &r[pi]) {
            protocols.push(r[pi].to_string());
        }
    }
    std::fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();
    for (stem, prefix) in FIGURES {
        let (Some(mi), Some(si)) = (col(&format!("{prefix}_mean")), col(&format!("{prefix}_sd")))
        else {
            continue;
        };
        let mut table: BTreeMap<u64, BTreeMap<&str, (&str, &str)>> = BTreeMap::new();
        for r in &rows {
            let n: u64 = r[ni].parse().unwrap_or(0);
            table.entry(n).or_default().insert(&r[pi], (&r[mi], &r[si]));
        }
        let path = out_dir.join(format!("{stem}.dat"));
        let mut f = std::io::BufWriter::new(std::fs::File::create(&path)?);
        write!(f, "# nodes")?;
        for p in &protocols {
            write!(f, " {p}_mean {p}_sd")?;
        }
        writeln!(f)?;
        for (n, cells) in &table {
            write!(f, "{n}")?;
            for p in &protocols {
                let (m, s) = cells.get(p.as_str()).copied().unwrap_or(("nan", "nan"));
                write!(f, " {m} {s}")?;
            }
            writeln!(f)?;
        }
        f.flush()?;
        written.push(path);
    }
    Ok(written)
}
