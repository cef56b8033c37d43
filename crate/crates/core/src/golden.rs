//! Reference values, stored verbatim.
//!
//! Every decimal string here is compared digit-for-digit (to within one unit
//! in its last printed place) by the acceptance suite and the CLI. Integer
//! polynomials are stored low-degree first.

/// Largest root of the limiting characteristic polynomial.
pub const CHARACTERISTIC_ROOT: &str = "20.912901011846452219";

/// Growth constant for q = 3.
pub const ALPHA: &str = "2.7551046130236330002";

/// Growth constant for q = 3, to more places.
pub const ALPHA_LONG: &str = "2.75510461302363300022127";

/// Leading constant `C` in `|A| <= C alpha^n / sqrt(n) (1 + c1/n + ...)`.
pub const LEADING_CONSTANT: &str = "3.3267627467425979588";

/// First correction coefficient `c1`.
pub const FIRST_CORRECTION: &str = "-5.1543714155636062458";

/// Growth constants for prime powers 4 <= q <= 31.
pub const GROWTH_TABLE: [(u32, &str); 15] = [
    (4, "3.610718613276039349"),
    (5, "4.461577765702577811"),
    (7, "6.156204863216738416"),
    (8, "7.0015547549940074584"),
    (9, "7.846120582585805712"),
    (11, "9.533685392075550992"),
    (13, "11.21990798911487743"),
    (16, "13.74776213458745700"),
    (17, "14.590117162"),
    (19, "16.274551068400264"),
    (23, "19.6426364587288"),
    (25, "21.3264083101"),
    (27, "23.010051182485787"),
    (29, "24.69359086763659"),
    (31, "26.3770467097314914"),
];

/// Annihilating operator of `d(n) = C(3n, 2n)_2`:
/// `P0(n) d(n) + P1(n) d(n+1) + P2(n) d(n+2) = 0`, each `P_i` a product of factors.
pub const RECURRENCE_P0: &[&[i64]] = &[
    &[243],
    &[5, 3],
    &[2, 3],
    &[20, 11],
    &[4, 3],
    &[1, 3],
    &[1, 1],
];
pub const RECURRENCE_P1: &[&[i64]] = &[&[-18], &[5, 3], &[1, 2], &[4, 3], &[1350, 3505, 2898, 759]];
pub const RECURRENCE_P2: &[&[i64]] =
    &[&[16], &[5, 4], &[3, 2], &[1, 2], &[9, 11], &[7, 4], &[2, 1]];

/// Constant-coefficient limit `19683 d0(n) - 22356 d0(n+1) + 1024 d0(n+2) = 0`.
pub const LIMIT_RECURRENCE: [i64; 3] = [19683, -22356, 1024];

/// Number of printed fractional digits of a decimal string.
pub fn printed_decimals(s: &str) -> u32 {
    s.split_once('.').map_or(0, |(_, frac)| frac.len() as u32)
}
