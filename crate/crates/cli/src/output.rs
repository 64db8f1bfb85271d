use std::fs::File;
use std::io::{self, BufWriter, Write};

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::ser::{CompactFormatter, Formatter};

use crate::config::RunConfig;

/// Standard output, or `<output_dir>/<name>.<ext>` when a directory is
/// configured.
pub fn sink(config: &RunConfig, name: &str) -> Result<Box<dyn Write>> {
    match &config.output_dir {
        None => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
        Some(dir) => {
            std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            let path = dir.join(format!("{name}.{}", config.format.extension()));
            let file =
                File::create(&path).with_context(|| format!("creating {}", path.display()))?;
            Ok(Box::new(BufWriter::new(file)))
        }
    }
}

/// Compact JSON whose floats carry 17 significant digits, matching the
/// delimited-text outputs.
struct Sci17;

impl Formatter for Sci17 {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        CompactFormatter.write_f32(writer, value)
    }
}

pub fn write_json<W: Write, T: Serialize>(out: &mut W, value: &T) -> Result<()> {
    let mut ser = serde_json::Serializer::with_formatter(&mut *out, Sci17);
    value.serialize(&mut ser)?;
    out.write_all(b"\n")?;
    Ok(())
}
