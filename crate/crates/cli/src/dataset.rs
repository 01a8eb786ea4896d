use std::io::{self, BufRead, Write};

/// A CSV table with `# key: value` metadata lines above the header.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Dataset {
    pub metadata: Vec<(String, String)>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn format_number(x: f64) -> String {
    format!("{x:.16e}")
}

impl Dataset {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Parses a numeric cell; `None` for empty cells.
    pub fn value(&self, row: usize, col: &str) -> Option<f64> {
        let c = self.column(col)?;
        self.rows[row][c].parse().ok()
    }

    pub fn write<W: Write>(&self, mut out: W) -> io::Result<()> {
        for (k, v) in &self.metadata {
            writeln!(out, "# {k}: {v}")?;
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut buf = Vec::new();
        self.write(&mut buf).expect("writing to memory");
        buf
    }

    pub fn read<R: BufRead>(mut input: R) -> io::Result<Dataset> {
        let mut metadata = Vec::new();
        let mut body = String::new();
        let mut line = String::new();
        while input.read_line(&mut line)? > 0 {
            match line.strip_prefix('#') {
                Some(meta) if body.is_empty() => {
                    let (k, v) = meta.trim().split_once(':').unwrap_or((meta.trim(), ""));
                    metadata.push((k.trim().to_string(), v.trim().to_string()));
                }
                _ => body.push_str(&line),
            }
            line.clear();
        }
        let mut r = csv::Reader::from_reader(body.as_bytes());
        let header = r.headers()?.iter().map(str::to_string).collect();
        let rows = r
            .records()
            .map(|rec| rec.map(|rec| rec.iter().map(str::to_string).collect()))
            .collect::<Result<_, _>>()?;
        Ok(Dataset {
            metadata,
            header,
            rows,
        })
    }
}
