//! Integer lattice helpers shared by the torus code paths.

/// `floor(sqrt(n))`, exact for all `u64`.
pub(crate) fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|s| s > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|s| s <= n) {
        r += 1;
    }
    r
}

/// Largest `N` with `sqrt(N as f64) <= radius`, matching the inclusion rule
/// used when enumerating lattice vectors. `None` for negative radius.
pub(crate) fn max_norm_sq(radius: f64) -> Option<u64> {
    if radius < 0.0 || !radius.is_finite() {
        return None;
    }
    let mut n = (radius * radius).floor() as u64;
    while n > 0 && (n as f64).sqrt() > radius {
        n -= 1;
    }
    while ((n + 1) as f64).sqrt() <= radius {
        n += 1;
    }
    Some(n)
}

/// `r_n(N)` for `N = 0..=n_max`, by direct enumeration of the lattice ball.
pub(crate) fn representation_table(dim: usize, n_max: u64) -> Vec<u64> {
    let len = n_max as usize + 1;
    let l = isqrt(n_max) as i64;
    let mut r2 = vec![0u64; len];
    for x in -l..=l {
        let rest = n_max - (x * x) as u64;
        let ly = isqrt(rest) as i64;
        for y in -ly..=ly {
            r2[(x * x + y * y) as usize] += 1;
        }
    }
    if dim == 2 {
        return r2;
    }
    let mut r3 = vec![0u64; len];
    for z in -l..=l {
        let z2 = (z * z) as usize;
        for (n, slot) in r3.iter_mut().enumerate().skip(z2) {
            *slot += r2[n - z2];
        }
    }
    r3
}

/// Number of lattice points `a` in `Z^dim` with `|a|^2 <= n_max`.
pub(crate) fn ball_count(dim: usize, n_max: u64) -> u64 {
    let l = isqrt(n_max) as i64;
    let mut total = 0u64;
    for x in -l..=l {
        let rx = n_max - (x * x) as u64;
        if dim == 2 {
            total += 2 * isqrt(rx) + 1;
        } else {
            let ly = isqrt(rx) as i64;
            for y in -ly..=ly {
                total += 2 * isqrt(rx - (y * y) as u64) + 1;
            }
        }
    }
    total
}
