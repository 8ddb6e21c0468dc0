//! Planar point-in-polygon test for map-drawn filter regions.

/// A `(lat, lon)` pair.
pub type LatLon = (f64, f64);

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeoError {
    #[error("polygon needs at least 3 distinct vertices, got {0}")]
    TooFewVertices(usize),
    #[error("polygon has zero area")]
    DegeneratePolygon,
    #[error("non-finite coordinate")]
    NonFinite,
}

/// Drops an explicit closing vertex equal to the first one.
fn open_ring(polygon: &[LatLon]) -> &[LatLon] {
    match polygon {
        [first, .., last] if polygon.len() > 1 && first == last => &polygon[..polygon.len() - 1],
        _ => polygon,
    }
}

/// Twice the signed shoelace area.
fn doubled_area(ring: &[LatLon]) -> f64 {
    let n = ring.len();
    (0..n)
        .map(|i| {
            let (y1, x1) = ring[i];
            let (y2, x2) = ring[(i + 1) % n];
            x1 * y2 - x2 * y1
        })
        .sum()
}

/// Checks that `polygon` is usable as a filter region.
pub fn validate_polygon(polygon: &[LatLon]) -> Result<(), GeoError> {
    let ring = open_ring(polygon);
    if ring.len() < 3 {
        return Err(GeoError::TooFewVertices(ring.len()));
    }
    if ring.iter().any(|(a, b)| !a.is_finite() || !b.is_finite()) {
        return Err(GeoError::NonFinite);
    }
    if doubled_area(ring) == 0.0 {
        return Err(GeoError::DegeneratePolygon);
    }
    Ok(())
}

fn on_segment(p: LatLon, a: LatLon, b: LatLon) -> bool {
    let (py, px) = p;
    let (ay, ax) = a;
    let (by, bx) = b;
    let cross = (bx - ax) * (py - ay) - (by - ay) * (px - ax);
    cross == 0.0 && px >= ax.min(bx) && px <= ax.max(bx) && py >= ay.min(by) && py <= ay.max(by)
}

/// Ray-casting parity test treating latitude as y and longitude as x.
/// Points on an edge or vertex count as inside. The ring may be given
/// with or without a repeated closing vertex.
pub fn point_in_polygon(point: LatLon, polygon: &[LatLon]) -> Result<bool, GeoError> {
    validate_polygon(polygon)?;
    if !point.0.is_finite() || !point.1.is_finite() {
        return Err(GeoError::NonFinite);
    }
    let ring = open_ring(polygon);
    let (py, px) = point;
    let mut inside = false;
    let mut j = ring.len() - 1;
    for i in 0..ring.len() {
        let a = ring[i];
        let b = ring[j];
        if on_segment(point, a, b) {
            return Ok(true);
        }
        let (ay, ax) = a;
        let (by, bx) = b;
        if (ay > py) != (by > py) {
            let x_cross = ax + (py - ay) * (bx - ax) / (by - ay);
            if px < x_cross {
                inside = !inside;
            }
        }
        j = i;
    }
    Ok(inside)
}
