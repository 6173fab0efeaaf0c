//! Dataset writers: CSV with a config-echo header, JSON documents, and a
//! gnuplot script next to each CSV.  All floats carry 17 significant
//! digits so value columns are byte-reproducible across runs.

use serde::Serialize;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format '{other}', expected csv or json")),
        }
    }
}

/// Format a float with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub struct DatasetWriter {
    pub out_dir: PathBuf,
    pub format: OutputFormat,
    /// One-line JSON echo of the run config.
    pub config_echo: String,
}

impl DatasetWriter {
    pub fn new<C: Serialize>(
        out_dir: &Path,
        format: OutputFormat,
        config: &C,
    ) -> Result<Self, String> {
        fs::create_dir_all(out_dir)
            .map_err(|e| format!("cannot create output dir {}: {e}", out_dir.display()))?;
        let config_echo = serde_json::to_string(config).map_err(|e| format!("config echo: {e}"))?;
        Ok(DatasetWriter {
            out_dir: out_dir.to_path_buf(),
            format,
            config_echo,
        })
    }

    fn header_lines(&self, extra: &[(&str, String)]) -> String {
        let mut h = String::new();
        h.push_str(&format!("# cmera {}\n", env!("CARGO_PKG_VERSION")));
        h.push_str(&format!("# config: {}\n", self.config_echo));
        for (k, v) in extra {
            h.push_str(&format!("# {k}: {v}\n"));
        }
        h
    }

    /// Write a table: columns + rows of already formatted cells.  In CSV
    /// mode also emits `<name>.gp` plotting the named y-columns against
    /// the first column.
    pub fn table(
        &self,
        name: &str,
        columns: &[&str],
        rows: &[Vec<String>],
        meta: &[(&str, String)],
        plot_ycols: &[usize],
        logscale_y: bool,
    ) -> Result<PathBuf, String> {
        match self.format {
            OutputFormat::Csv => {
                let path = self.out_dir.join(format!("{name}.csv"));
                let mut f = fs::File::create(&path)
                    .map_err(|e| format!("create {}: {e}", path.display()))?;
                let mut buf = self.header_lines(meta);
                buf.push_str(&columns.join(","));
                buf.push('\n');
                for row in rows {
                    buf.push_str(&row.join(","));
                    buf.push('\n');
                }
                f.write_all(buf.as_bytes())
                    .map_err(|e| format!("write {name}.csv: {e}"))?;
                self.gnuplot(name, columns, plot_ycols, logscale_y)?;
                Ok(path)
            }
            OutputFormat::Json => {
                let path = self.out_dir.join(format!("{name}.json"));
                let doc = serde_json::json!({
                    "version": env!("CARGO_PKG_VERSION"),
                    "config": serde_json::from_str::<serde_json::Value>(&self.config_echo)
                        .unwrap_or(serde_json::Value::Null),
                    "meta": meta.iter().map(|(k, v)| (k.to_string(), v.clone()))
                        .collect::<std::collections::BTreeMap<_, _>>(),
                    "columns": columns,
                    "rows": rows,
                });
                fs::write(&path, serde_json::to_string_pretty(&doc).unwrap())
                    .map_err(|e| format!("write {name}.json: {e}"))?;
                Ok(path)
            }
        }
    }

    /// Write an arbitrary JSON document (fit summaries, reports).
    pub fn json<T: Serialize>(&self, name: &str, payload: &T) -> Result<PathBuf, String> {
        let path = self.out_dir.join(format!("{name}.json"));
        let doc = serde_json::json!({
            "version": env!("CARGO_PKG_VERSION"),
            "config": serde_json::from_str::<serde_json::Value>(&self.config_echo)
                .unwrap_or(serde_json::Value::Null),
            "data": payload,
        });
        fs::write(&path, serde_json::to_string_pretty(&doc).unwrap())
            .map_err(|e| format!("write {name}.json: {e}"))?;
        Ok(path)
    }

    fn gnuplot(
        &self,
        name: &str,
        columns: &[&str],
        ycols: &[usize],
        logscale_y: bool,
    ) -> Result<(), String> {
        if ycols.is_empty() {
            return Ok(());
        }
        let path = self.out_dir.join(format!("{name}.gp"));
        let mut s = String::new();
        s.push_str("set datafile separator ','\n");
        s.push_str(&format!("set xlabel '{}'\n", columns[0]));
        if logscale_y {
            s.push_str("set logscale y\n");
        }
        let plots: Vec<String> = ycols
            .iter()
            .map(|&c| {
                format!(
                    "'{name}.csv' using 1:{} with lines title '{}'",
                    c + 1,
                    columns[c]
                )
            })
            .collect();
        s.push_str(&format!("plot {}\n", plots.join(", \\\n     ")));
        s.push_str("pause -1\n");
        fs::write(&path, s).map_err(|e| format!("write {name}.gp: {e}"))
    }
}
