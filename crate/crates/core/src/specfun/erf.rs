/// `(erf(u), erfc(u))`.
pub fn erfc_pair(u: f64) -> (f64, f64) {
    (libm::erf(u), libm::erfc(u))
}
