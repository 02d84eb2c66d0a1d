//! Rising and falling factorials.

/// Rising factorial `(x)_k = x (x+1) ... (x+k-1)`, with the empty product
/// `(x)_0 = 1`.
pub fn pochhammer(x: f64, k: u32) -> f64 {
    let mut acc = 1.0;
    for i in 0..k {
        acc *= x + i as f64;
    }
    acc
}

/// `k!` as a double.
pub fn factorial(k: u32) -> f64 {
    pochhammer(1.0, k)
}

/// Falling factorial `p (p-1) ... (p-k+1) = p!/(p-k)!`; zero when `k > p`.
pub fn falling(p: u32, k: u32) -> f64 {
    if k > p {
        return 0.0;
    }
    let mut acc = 1.0;
    for i in 0..k {
        acc *= (p - i) as f64;
    }
    acc
}
