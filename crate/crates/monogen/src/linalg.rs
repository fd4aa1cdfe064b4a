//! Exact linear algebra over the rationals and integers: fraction-free
//! determinants, characteristic polynomials, Hermite normal form, linear
//! solves, kernels over prime fields and Sylvester resultants.

use crate::{Int, Rat};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Determinant of a square integer matrix by fraction-free Bareiss
/// elimination.
pub fn det_bareiss(m: &[Vec<Int>]) -> Int {
    let n = m.len();
    if n == 0 {
        return Int::one();
    }
    let mut a: Vec<Vec<Int>> = m.to_vec();
    let mut sign = 1i32;
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return Int::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = &t / &prev;
            }
            a[i][k] = Int::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// Determinant of a square rational matrix: clear denominators per row, run
/// Bareiss, divide the scale back out.
pub fn det_rat(m: &[Vec<Rat>]) -> Rat {
    let n = m.len();
    if n == 0 {
        return Rat::one();
    }
    let mut scale = Int::one();
    let mut mi: Vec<Vec<Int>> = Vec::with_capacity(n);
    for row in m {
        let mut den = Int::one();
        for q in row {
            den = den.lcm(q.denom());
        }
        scale *= &den;
        mi.push(row.iter().map(|q| q.numer() * (&den / q.denom())).collect());
    }
    Rat::new(det_bareiss(&mi), scale)
}

/// Coefficients `c_0=1, c_1, .., c_n` of the characteristic polynomial
/// `t^n + c_1 t^{n-1} + .. + c_n` of an integer matrix, by the
/// Faddeev-LeVerrier recurrence (all divisions exact).
pub fn char_poly_int(m: &[Vec<Int>]) -> Vec<Int> {
    let n = m.len();
    let mut cs = Vec::with_capacity(n + 1);
    cs.push(Int::one());
    if n == 0 {
        return cs;
    }
    let mut a = m.to_vec();
    for k in 1..=n {
        let mut tr = Int::zero();
        for i in 0..n {
            tr += &a[i][i];
        }
        let c = -tr / Int::from(k as i64);
        cs.push(c.clone());
        if k == n {
            break;
        }
        // a <- m * (a + c I)
        for i in 0..n {
            a[i][i] += &c;
        }
        let mut next = vec![vec![Int::zero(); n]; n];
        for i in 0..n {
            for l in 0..n {
                if m[i][l].is_zero() {
                    continue;
                }
                let mil = &m[i][l];
                for j in 0..n {
                    if !a[l][j].is_zero() {
                        next[i][j] += mil * &a[l][j];
                    }
                }
            }
        }
        a = next;
    }
    cs
}

/// Solve `M x = rhs` over the rationals; `None` when `M` is singular.
pub fn solve_rat(m: &[Vec<Rat>], rhs: &[Rat]) -> Option<Vec<Rat>> {
    let n = m.len();
    let mut a: Vec<Vec<Rat>> = m
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    for k in 0..n {
        let piv = (k..n).find(|&r| !a[r][k].is_zero())?;
        a.swap(k, piv);
        let inv = a[k][k].clone();
        for j in k..=n {
            a[k][j] = &a[k][j] / &inv;
        }
        for i in 0..n {
            if i != k && !a[i][k].is_zero() {
                let f = a[i][k].clone();
                for j in k..=n {
                    let t = &a[k][j] * &f;
                    a[i][j] -= t;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[row.len() - 1].clone()).collect())
}

/// Inverse of a square rational matrix; `None` when singular.
pub fn inverse_rat(m: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rat>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            for j in 0..n {
                r.push(if i == j { Rat::one() } else { Rat::zero() });
            }
            r
        })
        .collect();
    for k in 0..n {
        let piv = (k..n).find(|&r| !a[r][k].is_zero())?;
        a.swap(k, piv);
        let inv = a[k][k].clone();
        for j in k..2 * n {
            a[k][j] = &a[k][j] / &inv;
        }
        for i in 0..n {
            if i != k && !a[i][k].is_zero() {
                let f = a[i][k].clone();
                for j in k..2 * n {
                    let t = &a[k][j] * &f;
                    a[i][j] -= t;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Lower-triangular Hermite normal form of the lattice spanned by the rows of
/// a (possibly rectangular, full column rank) integer matrix. The result is
/// square with positive diagonal, zeros to the right of each pivot and
/// below-diagonal entries reduced into `[0, pivot)`.
///
/// Row convention: row `i` of the output has its pivot in column `i`, which
/// matches basis matrices whose element `i` is supported on power products
/// `0..=i`.
pub fn hnf_lower(rows: &[Vec<Int>], ncols: usize) -> Vec<Vec<Int>> {
    let mut work: Vec<Vec<Int>> = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let mut out: Vec<Vec<Int>> = Vec::with_capacity(ncols);
    // eliminate from the highest column down, peeling one pivot row per column
    for col in (0..ncols).rev() {
        loop {
            let nz: Vec<usize> = (0..work.len()).filter(|&r| !work[r][col].is_zero()).collect();
            if nz.len() <= 1 {
                break;
            }
            // combine the two rows with smallest nonzero |entry| in this column
            let mut idx = nz.clone();
            idx.sort_by_key(|&r| work[r][col].abs());
            let (r0, r1) = (idx[0], idx[1]);
            let q = div_round(&work[r1][col], &work[r0][col]);
            for j in 0..ncols {
                let t = &work[r0][j] * &q;
                work[r1][j] -= t;
            }
        }
        if let Some(r) = (0..work.len()).find(|&r| !work[r][col].is_zero()) {
            let mut row = work.swap_remove(r);
            if row[col].is_negative() {
                for x in row.iter_mut() {
                    *x = -x.clone();
                }
            }
            out.push(row);
        } else {
            panic!("hnf_lower: rank deficiency at column {}", col);
        }
    }
    out.reverse(); // now out[i] has pivot in column i
    // reduce below-diagonal entries
    for i in 0..out.len() {
        for j in (0..i).rev() {
            if out[i][j].is_zero() && !out[i][j].is_negative() {
                continue;
            }
            let q = out[i][j].div_floor(&out[j][j]);
            if q.is_zero() {
                continue;
            }
            for k in 0..=j {
                let t = &out[j][k] * &q;
                out[i][k] -= t;
            }
        }
    }
    out
}

/// Rounded division used by the HNF Euclidean steps.
fn div_round(a: &Int, b: &Int) -> Int {
    let (q, r) = a.div_rem(b);
    let two_r: Int = &r * Int::from(2);
    if two_r.abs() > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

/// Basis of the kernel of a square matrix over `F_p` (entries reduced mod p).
pub fn kernel_mod_p(m: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let n = m.len();
    let mut a: Vec<Vec<u64>> = m.iter().map(|r| r.iter().map(|&x| x % p).collect()).collect();
    let mut pivot_col_of_row = Vec::new();
    let mut row = 0usize;
    let inv = |x: u64| mod_pow(x, p - 2, p); // p prime
    for col in 0..n {
        if let Some(r) = (row..n).find(|&r| a[r][col] != 0) {
            a.swap(row, r);
            let iv = inv(a[row][col]);
            for j in col..n {
                a[row][j] = mulmod(a[row][j], iv, p);
            }
            for i in 0..n {
                if i != row && a[i][col] != 0 {
                    let f = a[i][col];
                    for j in col..n {
                        let t = mulmod(f, a[row][j], p);
                        a[i][j] = (a[i][j] + p - t) % p;
                    }
                }
            }
            pivot_col_of_row.push(col);
            row += 1;
        }
    }
    let pivot_cols: Vec<usize> = pivot_col_of_row.clone();
    let free_cols: Vec<usize> = (0..n).filter(|c| !pivot_cols.contains(c)).collect();
    let mut basis = Vec::new();
    for &fc in &free_cols {
        let mut v = vec![0u64; n];
        v[fc] = 1;
        for (r, &pc) in pivot_col_of_row.iter().enumerate() {
            let coeff = a[r][fc];
            if coeff != 0 {
                v[pc] = p - coeff;
            }
        }
        basis.push(v);
    }
    basis
}

pub fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Sylvester resultant of two rational polynomials given by coefficient
/// slices (`c[i]` the coefficient of `t^i`).
pub fn resultant(f: &[Rat], g: &[Rat]) -> Rat {
    let df = f.len().checked_sub(1).expect("resultant of empty polynomial");
    let dg = g.len().checked_sub(1).expect("resultant of empty polynomial");
    if df == 0 {
        return f[0].clone().pow(dg as i32);
    }
    if dg == 0 {
        return g[0].clone().pow(df as i32);
    }
    let n = df + dg;
    let mut m = vec![vec![Rat::zero(); n]; n];
    for i in 0..dg {
        for (j, c) in f.iter().enumerate() {
            m[i][i + df - j] = c.clone();
        }
    }
    for i in 0..df {
        for (j, c) in g.iter().enumerate() {
            m[dg + i][i + dg - j] = c.clone();
        }
    }
    det_rat(&m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rat {
        Rat::from(Int::from(n))
    }

    #[test]
    fn bareiss_determinants() {
        let m = vec![
            vec![Int::from(2), Int::from(1)],
            vec![Int::from(7), Int::from(4)],
        ];
        assert_eq!(det_bareiss(&m), Int::from(1));
        let m3 = vec![
            vec![Int::from(1), Int::from(2), Int::from(3)],
            vec![Int::from(4), Int::from(5), Int::from(6)],
            vec![Int::from(7), Int::from(8), Int::from(10)],
        ];
        assert_eq!(det_bareiss(&m3), Int::from(-3));
    }

    #[test]
    fn char_poly_int_matches_hand_computation() {
        // [[0, 5], [1, 0]] ~ multiplication by sqrt(5): t^2 - 5
        let m = vec![vec![Int::zero(), Int::from(5)], vec![Int::one(), Int::zero()]];
        assert_eq!(char_poly_int(&m), vec![Int::one(), Int::zero(), Int::from(-5)]);
    }

    #[test]
    fn hnf_lower_triangular_canonical() {
        // lattice generated by (2,0) and (1,1): HNF rows (1,0)? no - pivot col 1 second row
        let rows = vec![
            vec![Int::from(2), Int::from(0)],
            vec![Int::from(1), Int::from(1)],
        ];
        let h = hnf_lower(&rows, 2);
        assert_eq!(h[0], vec![Int::from(2), Int::from(0)]);
        assert_eq!(h[1], vec![Int::from(1), Int::from(1)]);

        let rows = vec![
            vec![Int::from(2), Int::from(0)],
            vec![Int::from(3), Int::from(6)],
        ];
        let h = hnf_lower(&rows, 2);
        // det preserved up to sign: 12
        assert_eq!(&h[0][0] * &h[1][1], Int::from(12));
        assert!(h[1][0] >= Int::zero() && h[1][0] < h[0][0].clone() || h[0][0].is_one());
    }

    #[test]
    fn kernels_mod_p() {
        let m = vec![vec![1u64, 2], vec![2, 4]];
        let k = kernel_mod_p(&m, 5);
        assert_eq!(k.len(), 1);
        let v = &k[0];
        assert_eq!((v[0] + 2 * v[1]) % 5, 0);
    }

    #[test]
    fn resultant_and_discriminant() {
        // disc(t^2 - 5) = 20 = -res(f, f')/1 * sign; via UniPoly in tower tests
        let f = [q(-5), q(0), q(1)];
        let fp = [q(0), q(2)];
        assert_eq!(resultant(&f, &fp), q(-20));
    }
}
