//! Unit conversion for numeric filters over measures.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Quantity {
    Length,
    Mass,
}

fn scale(unit: &str) -> Option<(Quantity, f64)> {
    let u = unit.trim().to_ascii_lowercase();
    let entry = match u.as_str() {
        "mm" | "millimetre" | "millimeter" => (Quantity::Length, 1e-3),
        "cm" | "centimetre" | "centimeter" => (Quantity::Length, 1e-2),
        "dm" | "decimetre" | "decimeter" => (Quantity::Length, 1e-1),
        "m" | "metre" | "meter" => (Quantity::Length, 1.0),
        "km" | "kilometre" | "kilometer" => (Quantity::Length, 1e3),
        "mg" | "milligram" => (Quantity::Mass, 1e-6),
        "g" | "gram" => (Quantity::Mass, 1e-3),
        "kg" | "kilogram" => (Quantity::Mass, 1.0),
        _ => return None,
    };
    Some(entry)
}

/// Converts `value` expressed in `from` into `to`. Identical unit strings
/// always convert, known units convert within the same quantity, and
/// everything else is `None`.
pub fn convert(value: f64, from: &str, to: &str) -> Option<f64> {
    if from.trim().eq_ignore_ascii_case(to.trim()) {
        return Some(value);
    }
    let (qa, fa) = scale(from)?;
    let (qb, fb) = scale(to)?;
    (qa == qb).then(|| value * fa / fb)
}

/// Splits a wire value like `200cm` into its number and optional unit.
pub fn split_quantity(text: &str) -> Option<(f64, Option<&str>)> {
    let text = text.trim();
    let end = text
        .char_indices()
        .find(|(_, c)| !(c.is_ascii_digit() || matches!(c, '.' | '-' | '+')))
        .map_or(text.len(), |(i, _)| i);
    let number: f64 = text[..end].parse().ok()?;
    if !number.is_finite() {
        return None;
    }
    let unit = text[end..].trim();
    Some((number, (!unit.is_empty()).then_some(unit)))
}
