//! Representations of an integer as a sum of two squares.

/// All ordered pairs `(m, n)` of non-negative integers with `m² + n² = q`.
pub fn representations(q: u64) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    let mut m: u64 = 0;
    while m * m <= q {
        let rest = q - m * m;
        let n = isqrt(rest);
        if n * n == rest {
            out.push((m as u32, n as u32));
        }
        m += 1;
    }
    out
}

/// Integer square root (floor).
pub fn isqrt(q: u64) -> u64 {
    let mut r = (q as f64).sqrt() as u64;
    while r * r > q {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= q {
        r += 1;
    }
    r
}
