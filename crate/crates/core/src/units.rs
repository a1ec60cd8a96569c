//! dB / linear conversions.

#[inline]
pub fn db_to_linear(db: f64) -> f64 {
    (db * (std::f64::consts::LN_10 / 10.0)).exp()
}

#[inline]
pub fn linear_to_db(lin: f64) -> f64 {
    10.0 * lin.log10()
}
