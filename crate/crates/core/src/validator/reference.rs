//! Published reference values. These are constants, never computed; the
//! table reproduction and the acceptance suite compare against them.

/// Contrast at `q = k` published for the Pascal-triangle construction,
/// `(k, n, numerator, denominator)`.
pub const PUBLISHED_CONTRAST_AT_K: &[(usize, usize, i128, i128)] = &[
    (2, 2, 1, 2),
    (2, 3, 1, 3),
    (2, 4, 1, 4),
    (2, 5, 1, 5),
    (2, 6, 1, 6),
    (2, 7, 1, 7),
    (2, 8, 1, 8),
    (2, 9, 1, 9),
    (2, 10, 1, 10),
    (3, 3, 1, 4),
    (3, 4, 1, 6),
    (3, 5, 1, 8),
    (3, 6, 1, 10),
    (3, 7, 1, 12),
    (3, 8, 1, 14),
    (3, 9, 1, 16),
    (3, 10, 1, 18),
    (4, 4, 1, 8),
    (4, 5, 1, 15),
    (4, 6, 1, 24),
    (4, 7, 1, 35),
    (4, 8, 1, 48),
    (4, 9, 1, 63),
    (4, 10, 1, 80),
];

/// Optimal contrast for exactly `k` stacked shares, from the linear
/// program of Hofmeister, Krause and Simon (2000).
pub const OPTIMAL_CONTRAST_AT_K: &[(usize, usize, i128, i128)] = &[
    (2, 2, 1, 2),
    (2, 3, 1, 3),
    (2, 4, 1, 3),
    (2, 5, 3, 10),
    (2, 6, 3, 10),
    (2, 7, 2, 7),
    (2, 8, 2, 7),
    (2, 9, 5, 18),
    (2, 10, 5, 18),
    (3, 3, 1, 4),
    (3, 4, 1, 6),
    (3, 5, 1, 8),
    (3, 6, 1, 10),
    (3, 7, 1, 10),
    (3, 8, 2, 21),
    (3, 9, 5, 56),
    (3, 10, 1, 12),
    (4, 4, 1, 8),
    (4, 5, 1, 15),
    (4, 6, 1, 18),
    (4, 7, 3, 70),
    (4, 8, 3, 80),
    (4, 9, 2, 63),
    (4, 10, 1, 35),
];

/// Published column counts `m` for `2 <= k <= n <= 10`, `(k, n, m)`.
pub const PUBLISHED_COLUMN_COUNT: &[(usize, usize, i128)] = &[
    (2, 2, 2),
    (2, 3, 3),
    (2, 4, 4),
    (2, 5, 5),
    (2, 6, 6),
    (2, 7, 7),
    (2, 8, 8),
    (2, 9, 9),
    (2, 10, 10),
    (3, 3, 4),
    (3, 4, 6),
    (3, 5, 8),
    (3, 6, 10),
    (3, 7, 12),
    (3, 8, 14),
    (3, 9, 16),
    (3, 10, 18),
    (4, 4, 8),
    (4, 5, 15),
    (4, 6, 24),
    (4, 7, 35),
    (4, 8, 48),
    (4, 9, 63),
    (4, 10, 80),
    (5, 5, 16),
    (5, 6, 30),
    (5, 7, 48),
    (5, 8, 70),
    (5, 9, 96),
    (5, 10, 126),
    (6, 6, 32),
    (6, 7, 70),
    (6, 8, 128),
    (6, 9, 210),
    (6, 10, 320),
    (7, 7, 64),
    (7, 8, 140),
    (7, 9, 256),
    (7, 10, 420),
    (8, 8, 128),
    (8, 9, 315),
    (8, 10, 640),
    (9, 9, 256),
    (9, 10, 630),
    (10, 10, 512),
];

/// Published `q = 3..=8` contrast profile of the Pascal-triangle (3,8)
/// scheme, `(q, numerator, denominator)`.
pub const PUBLISHED_PROFILE_3_8: &[(usize, i128, i128)] = &[
    (3, 1, 14),
    (4, 2, 14),
    (5, 3, 14),
    (6, 4, 14),
    (7, 5, 14),
    (8, 6, 14),
];

/// Contrast profile of the contrast-optimal (3,8) scheme of Hofmeister,
/// Krause and Simon (2000), with C0 = [14M_0, M_6] and C1 = [M_2, 14M_8].
pub const OPTIMAL_PROFILE_3_8: &[(usize, i128, i128)] = &[
    (3, 4, 42),
    (4, 8, 42),
    (5, 11, 42),
    (6, 13, 42),
    (7, 14, 42),
    (8, 14, 42),
];

fn lookup<T: Copy>(table: &[(usize, usize, T)], k: usize, n: usize) -> Option<T> {
    table
        .iter()
        .find(|&&(tk, tn, _)| tk == k && tn == n)
        .map(|&(_, _, v)| v)
}

pub fn published_contrast_at_k(k: usize, n: usize) -> Option<(i128, i128)> {
    PUBLISHED_CONTRAST_AT_K
        .iter()
        .find(|e| e.0 == k && e.1 == n)
        .map(|e| (e.2, e.3))
}

pub fn optimal_contrast_at_k(k: usize, n: usize) -> Option<(i128, i128)> {
    OPTIMAL_CONTRAST_AT_K
        .iter()
        .find(|e| e.0 == k && e.1 == n)
        .map(|e| (e.2, e.3))
}

pub fn published_column_count(k: usize, n: usize) -> Option<i128> {
    lookup(PUBLISHED_COLUMN_COUNT, k, n)
}
