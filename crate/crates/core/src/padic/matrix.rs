//! Canonical row forms and lattice arithmetic over `Z/p^E`.
//!
//! The Howell form is the unique canonical row form whose span equals the
//! row span of the input. Unlike a Hermite/Smith reduction it also carries
//! the "closure" rows needed so that every span element whose leading
//! coordinate sits at column `j` is generated by the rows with pivot column
//! `>= j`. That property is what makes membership tests, kernels, and
//! intersections a single sweep.

use super::Modulus;
use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use std::fmt;

/// Dense matrix over `Z/p^E`, entries kept in canonical range.
#[derive(Clone, PartialEq, Eq)]
pub struct ResidueMatrix {
    modulus: Modulus,
    rows: usize,
    cols: usize,
    entries: Vec<BigUint>,
}

impl fmt::Debug for ResidueMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}x{} over {:?}", self.rows, self.cols, self.modulus)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.entry(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl ResidueMatrix {
    pub fn from_rows(modulus: Modulus, cols: usize, rows: Vec<Vec<BigUint>>) -> Self {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in &rows {
            assert_eq!(r.len(), cols, "row length mismatch");
            for x in r {
                entries.push(modulus.reduce(x));
            }
        }
        ResidueMatrix {
            modulus,
            rows: rows.len(),
            cols,
            entries,
        }
    }

    pub fn from_i64_rows(modulus: Modulus, cols: usize, rows: &[Vec<i64>]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| modulus.reduce_int(&BigInt::from(x))).collect())
            .collect();
        Self::from_rows(modulus, cols, rows)
    }

    pub fn zero(modulus: Modulus, rows: usize, cols: usize) -> Self {
        ResidueMatrix {
            modulus,
            rows,
            cols,
            entries: vec![BigUint::zero(); rows * cols],
        }
    }

    pub fn identity(modulus: Modulus, n: usize) -> Self {
        let mut m = Self::zero(modulus, n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigUint::from(1u32);
        }
        m
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigUint {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[BigUint] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> Vec<BigUint> {
        self.row(i).to_vec()
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[BigUint]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    /// Row vector times matrix.
    pub fn apply_row(&self, v: &[BigUint]) -> Vec<BigUint> {
        assert_eq!(v.len(), self.rows, "vector/matrix shape mismatch");
        let mut out = vec![BigUint::zero(); self.cols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for j in 0..self.cols {
                let e = self.entry(i, j);
                if !e.is_zero() {
                    out[j] = self.modulus.add(&out[j], &self.modulus.mul(vi, e));
                }
            }
        }
        out
    }

    pub fn matmul(&self, other: &ResidueMatrix) -> ResidueMatrix {
        assert_eq!(self.cols, other.rows);
        let rows = (0..self.rows).map(|i| other.apply_row(self.row(i))).collect();
        ResidueMatrix::from_rows(self.modulus.clone(), other.cols, rows)
    }

    pub fn vstack(&self, other: &ResidueMatrix) -> ResidueMatrix {
        assert_eq!(self.cols, other.cols);
        assert_eq!(self.modulus, other.modulus);
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        ResidueMatrix {
            modulus: self.modulus.clone(),
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pivot {
    pub col: usize,
    pub val: u32,
}

/// Canonical Howell form of a row span: zero rows removed, pivots are powers
/// of `p` in strictly increasing columns, entries above each pivot reduced
/// modulo the pivot, and the span closure rows included.
#[derive(Clone, PartialEq, Eq)]
pub struct HowellForm {
    matrix: ResidueMatrix,
    pivots: Vec<Pivot>,
}

impl fmt::Debug for HowellForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Howell{:?} pivots {:?}", self.matrix, self.pivots)
    }
}

fn vec_is_zero(v: &[BigUint]) -> bool {
    v.iter().all(|x| x.is_zero())
}

/// Sweep engine shared by the Howell form, kernels, transforms, and
/// intersections. Pivot search is restricted to the first `pivot_limit`
/// columns; rows that end up supported only on the later columns are
/// returned separately as `residual`.
struct SweepResult {
    rows: Vec<Vec<BigUint>>,
    pivots: Vec<Pivot>,
    residual: Vec<Vec<BigUint>>,
}

fn howell_sweep(m: &ResidueMatrix, pivot_limit: usize) -> SweepResult {
    let md = m.modulus().clone();
    let big_e = md.exponent();
    let cols = m.cols();
    let mut work: Vec<Vec<BigUint>> = m
        .iter_rows()
        .map(|r| r.to_vec())
        .filter(|r| !vec_is_zero(r))
        .collect();
    let mut rows: Vec<Vec<BigUint>> = Vec::new();
    let mut pivots: Vec<Pivot> = Vec::new();

    for j in 0..pivot_limit.min(cols) {
        // pick the work row with minimal valuation at column j
        let mut best: Option<(usize, u32)> = None;
        for (i, r) in work.iter().enumerate() {
            if let Some(v) = md.valuation(&r[j]) {
                if best.map_or(true, |(_, bv)| v < bv) {
                    best = Some((i, v));
                }
            }
        }
        let Some((idx, v)) = best else { continue };
        let mut piv = work.swap_remove(idx);
        // normalize the pivot entry to exactly p^v
        let unit = &piv[j] / md.p_pow(v);
        let unit_inv = md.inverse(&unit).expect("unit part is invertible");
        for x in piv.iter_mut() {
            *x = md.mul(x, &unit_inv);
        }
        // eliminate column j from every other work row
        let pv = md.p_pow(v);
        for r in work.iter_mut() {
            if r[j].is_zero() {
                continue;
            }
            let q = &r[j] / &pv; // exact: valuation >= v
            for (x, p) in r.iter_mut().zip(piv.iter()) {
                *x = md.sub(x, &md.mul(&q, p));
            }
        }
        work.retain(|r| !vec_is_zero(r));
        // the torsion row p^(E-v) * piv keeps the span closure honest
        if v > 0 {
            let t = md.p_pow(big_e - v);
            let tr: Vec<BigUint> = piv.iter().map(|x| md.mul(&t, x)).collect();
            if !vec_is_zero(&tr) {
                work.push(tr);
            }
        }
        pivots.push(Pivot { col: j, val: v });
        rows.push(piv);
    }

    // reduce entries above each pivot modulo the pivot
    for t in 0..rows.len() {
        let Pivot { col, val } = pivots[t];
        let pv = md.p_pow(val);
        let piv = rows[t].clone();
        for s in 0..t {
            let q = &rows[s][col] / &pv;
            if q.is_zero() {
                continue;
            }
            for (x, p) in rows[s].iter_mut().zip(piv.iter()) {
                *x = md.sub(x, &md.mul(&q, p));
            }
        }
    }

    SweepResult {
        rows,
        pivots,
        residual: work,
    }
}

/// Canonical Howell form of the row span of `m`.
pub fn howell_form(m: &ResidueMatrix) -> HowellForm {
    let sweep = howell_sweep(m, m.cols());
    debug_assert!(sweep.residual.is_empty());
    HowellForm {
        matrix: ResidueMatrix::from_rows(m.modulus().clone(), m.cols(), sweep.rows),
        pivots: sweep.pivots,
    }
}

impl HowellForm {
    pub fn matrix(&self) -> &ResidueMatrix {
        &self.matrix
    }

    pub fn pivots(&self) -> &[Pivot] {
        &self.pivots
    }

    pub fn modulus(&self) -> &Modulus {
        self.matrix.modulus()
    }

    pub fn cols(&self) -> usize {
        self.matrix.cols()
    }

    pub fn num_rows(&self) -> usize {
        self.matrix.rows()
    }

    /// `log_p` of the number of elements in the span, inside `(Z/p^E)^n`.
    pub fn log_span_size(&self) -> u64 {
        let e = self.modulus().exponent() as u64;
        self.pivots.iter().map(|p| e - p.val as u64).sum()
    }

    /// Reduce `v` to the canonical representative of its coset modulo the
    /// span. Two vectors are congruent iff their reductions are equal.
    pub fn coset_representative(&self, v: &[BigUint]) -> Vec<BigUint> {
        let md = self.modulus();
        let mut v: Vec<BigUint> = v.iter().map(|x| md.reduce(x)).collect();
        for (t, piv) in self.pivots.iter().enumerate() {
            let pv = md.p_pow(piv.val);
            let q = &v[piv.col] / &pv;
            if q.is_zero() {
                continue;
            }
            let row = self.matrix.row(t);
            for (x, p) in v.iter_mut().zip(row.iter()) {
                *x = md.sub(x, &md.mul(&q, p));
            }
        }
        v
    }

    /// Membership by successive pivot elimination.
    pub fn contains(&self, v: &[BigUint]) -> bool {
        self.solve(v).is_some()
    }

    /// Express `v` as a combination of the Howell rows, if it lies in the
    /// span. Returned coefficients line up with the rows of `matrix()`.
    pub fn solve(&self, v: &[BigUint]) -> Option<Vec<BigUint>> {
        let md = self.modulus();
        assert_eq!(v.len(), self.cols(), "vector length mismatch");
        let mut v: Vec<BigUint> = v.iter().map(|x| md.reduce(x)).collect();
        let mut coeffs = vec![BigUint::zero(); self.matrix.rows()];
        let mut next_pivot = 0usize;
        for j in 0..self.cols() {
            if v[j].is_zero() {
                if next_pivot < self.pivots.len() && self.pivots[next_pivot].col == j {
                    next_pivot += 1;
                }
                continue;
            }
            if next_pivot >= self.pivots.len() || self.pivots[next_pivot].col != j {
                return None; // leading entry at a non-pivot column
            }
            let piv = self.pivots[next_pivot];
            let vv = md.valuation(&v[j]).expect("nonzero entry");
            if vv < piv.val {
                return None; // pivot valuation obstruction
            }
            let q = &v[j] / md.p_pow(piv.val);
            let row = self.matrix.row(next_pivot);
            for (x, p) in v.iter_mut().zip(row.iter()) {
                *x = md.sub(x, &md.mul(&q, p));
            }
            coeffs[next_pivot] = q;
            next_pivot += 1;
        }
        if vec_is_zero(&v) {
            Some(coeffs)
        } else {
            None
        }
    }

    /// Span equality, decided canonically.
    pub fn same_span(&self, other: &HowellForm) -> bool {
        self == other
    }
}

/// True iff `v` lies in the row span of `m` (given in Howell form).
pub fn span_membership(m: &HowellForm, v: &[BigUint]) -> bool {
    m.contains(v)
}

/// Index of the row span of `m`, viewed inside the ambient module
/// `prod Z/p^{e_i}`, as a power of `p`. The span is saturated with the
/// ambient relations `p^{e_i} u_i` internally, so rows may be given as any
/// representatives.
pub fn span_index(m: &HowellForm, ambient_orders: &[u32]) -> BigUint {
    m.modulus().p_big().pow(span_index_log(m, ambient_orders) as u32)
}

/// `log_p` of [`span_index`].
pub fn span_index_log(m: &HowellForm, ambient_orders: &[u32]) -> u64 {
    let md = m.modulus().clone();
    let n = m.cols();
    assert_eq!(ambient_orders.len(), n, "ambient rank mismatch");
    for &e in ambient_orders {
        assert!(e <= md.exponent(), "ambient order exceeds working modulus");
    }
    let mut rows: Vec<Vec<BigUint>> = m.matrix.iter_rows().map(|r| r.to_vec()).collect();
    for (i, &e) in ambient_orders.iter().enumerate() {
        if e < md.exponent() {
            let mut r = vec![BigUint::zero(); n];
            r[i] = md.p_pow(e);
            rows.push(r);
        }
    }
    let saturated = howell_form(&ResidueMatrix::from_rows(md.clone(), n, rows));
    // |ambient| / |span| with both measured inside (Z/p^E)^n:
    // log index = n*E - log |saturated span|
    n as u64 * md.exponent() as u64 - saturated.log_span_size()
}

/// Kernel of the map `x -> x * m`, returned in Howell form over the source
/// space `(Z/p^E)^rows`.
pub fn row_kernel(m: &ResidueMatrix) -> HowellForm {
    let md = m.modulus().clone();
    let k = m.rows();
    let n = m.cols();
    let mut aug_rows = Vec::with_capacity(k);
    for i in 0..k {
        let mut r = m.row_vec(i);
        let mut id = vec![BigUint::zero(); k];
        id[i] = BigUint::from(1u32);
        r.extend(id);
        aug_rows.push(r);
    }
    let aug = ResidueMatrix::from_rows(md.clone(), n + k, aug_rows);
    let sweep = howell_sweep(&aug, n);
    let kernel_rows: Vec<Vec<BigUint>> = sweep.residual.iter().map(|r| r[n..].to_vec()).collect();
    howell_form(&ResidueMatrix::from_rows(md, k, kernel_rows))
}

/// Howell form together with a transform `T` such that `T * m` equals the
/// Howell rows; used to express span members over the original generators.
pub fn howell_with_transform(m: &ResidueMatrix) -> (HowellForm, ResidueMatrix) {
    let md = m.modulus().clone();
    let k = m.rows();
    let n = m.cols();
    let mut aug_rows = Vec::with_capacity(k);
    for i in 0..k {
        let mut r = m.row_vec(i);
        let mut id = vec![BigUint::zero(); k];
        id[i] = BigUint::from(1u32);
        r.extend(id);
        aug_rows.push(r);
    }
    let aug = ResidueMatrix::from_rows(md.clone(), n + k, aug_rows);
    let sweep = howell_sweep(&aug, n);
    let h_rows: Vec<Vec<BigUint>> = sweep.rows.iter().map(|r| r[..n].to_vec()).collect();
    let t_rows: Vec<Vec<BigUint>> = sweep.rows.iter().map(|r| r[n..].to_vec()).collect();
    let h = HowellForm {
        matrix: ResidueMatrix::from_rows(md.clone(), n, h_rows),
        pivots: sweep.pivots,
    };
    (h, ResidueMatrix::from_rows(md, k, t_rows))
}

/// Intersection of two row spans, in Howell form.
pub fn span_intersection(a: &ResidueMatrix, b: &ResidueMatrix) -> HowellForm {
    assert_eq!(a.cols(), b.cols());
    assert_eq!(a.modulus(), b.modulus());
    let md = a.modulus().clone();
    let n = a.cols();
    let mut rows = Vec::with_capacity(a.rows() + b.rows());
    for r in a.iter_rows() {
        let mut v = r.to_vec();
        v.extend_from_slice(r);
        rows.push(v);
    }
    for r in b.iter_rows() {
        let mut v = r.to_vec();
        v.extend(vec![BigUint::zero(); n]);
        rows.push(v);
    }
    let stacked = ResidueMatrix::from_rows(md.clone(), 2 * n, rows);
    let sweep = howell_sweep(&stacked, n);
    let inter_rows: Vec<Vec<BigUint>> = sweep.residual.iter().map(|r| r[n..].to_vec()).collect();
    howell_form(&ResidueMatrix::from_rows(md, n, inter_rows))
}

/// Preimage of the span of `target` under the row map `x -> x * map`,
/// as a lattice in the source space. Always contains the kernel of the map.
pub fn preimage_lattice(map: &ResidueMatrix, target: &ResidueMatrix) -> HowellForm {
    assert_eq!(map.cols(), target.cols());
    let md = map.modulus().clone();
    let k = map.rows();
    let n = map.cols();
    let mut rows = Vec::with_capacity(k + target.rows());
    for i in 0..k {
        let mut r = map.row_vec(i);
        let mut id = vec![BigUint::zero(); k];
        id[i] = BigUint::from(1u32);
        r.extend(id);
        rows.push(r);
    }
    for r in target.iter_rows() {
        let mut v = r.to_vec();
        v.extend(vec![BigUint::zero(); k]);
        rows.push(v);
    }
    let stacked = ResidueMatrix::from_rows(md.clone(), n + k, rows);
    let sweep = howell_sweep(&stacked, n);
    let pre_rows: Vec<Vec<BigUint>> = sweep.residual.iter().map(|r| r[n..].to_vec()).collect();
    howell_form(&ResidueMatrix::from_rows(md, k, pre_rows))
}

/// Smith-style diagonalization over `Z/p^E`: returns diagonal valuations
/// `v_1 <= v_2 <= ...` and the ambient column transforms. With new
/// coordinates `y = x * v`, the row span of `m` becomes the span of
/// `diag(p^{v_i})`, and `x = y * v_inv`.
pub struct SmithForm {
    pub diag: Vec<u32>,
    pub v: ResidueMatrix,
    pub v_inv: ResidueMatrix,
}

pub fn smith_form(m: &ResidueMatrix) -> SmithForm {
    let md = m.modulus().clone();
    let n = m.cols();
    let k = m.rows();
    let mut a: Vec<Vec<BigUint>> = m.iter_rows().map(|r| r.to_vec()).collect();
    let mut v = ResidueMatrix::identity(md.clone(), n);
    let mut v_inv = ResidueMatrix::identity(md.clone(), n);
    let mut diag: Vec<u32> = Vec::new();

    let col_swap = |mat: &mut ResidueMatrix, c1: usize, c2: usize| {
        for i in 0..mat.rows {
            mat.entries.swap(i * mat.cols + c1, i * mat.cols + c2);
        }
    };
    let row_swap = |mat: &mut ResidueMatrix, r1: usize, r2: usize| {
        for j in 0..mat.cols {
            mat.entries.swap(r1 * mat.cols + j, r2 * mat.cols + j);
        }
    };

    let steps = k.min(n);
    for t in 0..steps {
        // locate the minimal-valuation entry in the trailing block
        let mut best: Option<(usize, usize, u32)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, x) in row.iter().enumerate().skip(t) {
                if let Some(val) = md.valuation(x) {
                    if best.map_or(true, |(_, _, bv)| val < bv) {
                        best = Some((i, j, val));
                    }
                }
            }
        }
        let Some((bi, bj, val)) = best else { break };
        a.swap(t, bi);
        if bj != t {
            for row in a.iter_mut() {
                row.swap(t, bj);
            }
            col_swap(&mut v, t, bj);
            row_swap(&mut v_inv, t, bj);
        }
        // normalize a[t][t] to p^val
        let pv = md.p_pow(val);
        let unit = &a[t][t] / &pv;
        let unit_inv = md.inverse(&unit).expect("unit part invertible");
        for x in a[t].iter_mut() {
            *x = md.mul(x, &unit_inv);
        }
        // clear column t below the diagonal (row ops, untracked)
        for i in t + 1..k {
            if a[i][t].is_zero() {
                continue;
            }
            let q = &a[i][t] / &pv;
            let pivot_row = a[t].clone();
            for (x, p) in a[i].iter_mut().zip(pivot_row.iter()) {
                *x = md.sub(x, &md.mul(&q, p));
            }
        }
        // clear row t to the right of the diagonal (column ops, tracked)
        for j in t + 1..n {
            if a[t][j].is_zero() {
                continue;
            }
            let q = &a[t][j] / &pv;
            for row in a.iter_mut() {
                let sub = md.mul(&q, &row[t].clone());
                row[j] = md.sub(&row[j], &sub);
            }
            for i in 0..n {
                let sub = md.mul(&q, &v.entry(i, t).clone());
                let idx = i * n + j;
                v.entries[idx] = md.sub(&v.entries[idx], &sub);
            }
            for jj in 0..n {
                let add = md.mul(&q, &v_inv.entry(j, jj).clone());
                let idx = t * n + jj;
                v_inv.entries[idx] = md.add(&v_inv.entries[idx], &add);
            }
        }
        diag.push(val);
    }

    debug_assert!({
        let prod = v.matmul(&v_inv);
        prod == ResidueMatrix::identity(md.clone(), n)
    });

    SmithForm { diag, v, v_inv }
}
