//! JSON emission with floats rendered at 17 significant digits.
//!
//! 17 digits are enough to reproduce any `f64` bit-exactly on parse, so
//! emitted reports round-trip and reruns compare byte-for-byte.

use std::io;

use serde::Serialize;
use serde_json::ser::{CompactFormatter, Formatter};

struct SigDigits17;

impl Formatter for SigDigits17 {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        CompactFormatter.write_f32(writer, value)
    }
}

/// Serialize to a JSON string with 17-significant-digit floats.
pub fn to_json_string<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SigDigits17);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(out).expect("JSON serializer emits UTF-8"))
}

/// The same 17-significant-digit rendering for text-mode output, so both
/// formats carry identical numeric content.
pub fn format_f64(value: f64) -> String {
    format!("{value:.16e}")
}
