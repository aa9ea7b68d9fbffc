//! Square matrices of representatives and of external numbers.

use std::cmp::Ordering;
use std::fmt;

use crate::eps_rational::EpsRational;
use crate::error::{Error, Result};
use crate::external_number::ExternalNumber;
use crate::neutrix::{MagnitudeClass, Neutrix};

/// Largest order accepted by the Leibniz determinant.
pub const MAX_LEIBNIZ_ORDER: usize = 6;

/// A failed predicate, with 1-based position where it applies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub position: Option<(usize, usize)>,
    pub message: String,
}

impl Violation {
    fn at(row: usize, col: usize, message: impl Into<String>) -> Self {
        Violation {
            position: Some((row + 1, col + 1)),
            message: message.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.position {
            Some((i, j)) => write!(f, "({i},{j}): {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

pub type Verdict = std::result::Result<(), Violation>;

/// All permutations of `0..n` with their signs.
pub fn permutations(n: usize) -> Vec<(Vec<usize>, i32)> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], sign: i32, out: &mut Vec<(Vec<usize>, i32)>) {
        let n = used.len();
        if prefix.len() == n {
            out.push((prefix.clone(), sign));
            return;
        }
        // choosing the t-th unused element costs t transpositions
        let mut t = 0;
        for x in 0..n {
            if used[x] {
                continue;
            }
            used[x] = true;
            prefix.push(x);
            rec(prefix, used, if t % 2 == 0 { sign } else { -sign }, out);
            prefix.pop();
            used[x] = false;
            t += 1;
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(n), &mut vec![false; n], 1, &mut out);
    out
}

fn check_square<T>(rows: &[Vec<T>]) -> Result<usize> {
    let n = rows.len();
    if n == 0 {
        return Err(Error::ShapeMismatch("empty matrix".into()));
    }
    for (i, r) in rows.iter().enumerate() {
        if r.len() != n {
            return Err(Error::ShapeMismatch(format!(
                "row {} has {} entries, expected {n}",
                i + 1,
                r.len()
            )));
        }
    }
    Ok(n)
}

fn check_indices(n: usize, rows: &[usize], cols: &[usize]) -> Result<()> {
    if rows.len() != cols.len() {
        return Err(Error::BadIndices(format!(
            "{} rows but {} columns",
            rows.len(),
            cols.len()
        )));
    }
    for list in [rows, cols] {
        if list.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::BadIndices("indices must be strictly increasing".into()));
        }
        if list.iter().any(|&i| i >= n) {
            return Err(Error::BadIndices(format!("index out of range for order {n}")));
        }
    }
    Ok(())
}

/// Square matrix over exact rational functions of `ε`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RealMatrix {
    rows: Vec<Vec<EpsRational>>,
}

impl RealMatrix {
    pub fn new(rows: Vec<Vec<EpsRational>>) -> Result<Self> {
        check_square(&rows)?;
        Ok(RealMatrix { rows })
    }

    pub fn identity(n: usize) -> Self {
        RealMatrix {
            rows: (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| if i == j { EpsRational::one() } else { EpsRational::zero() })
                        .collect()
                })
                .collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &EpsRational {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: EpsRational) {
        self.rows[i][j] = v;
    }

    pub fn rows(&self) -> &[Vec<EpsRational>] {
        &self.rows
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n())
    }

    pub fn mul(&self, other: &RealMatrix) -> Result<RealMatrix> {
        if self.n() != other.n() {
            return Err(Error::ShapeMismatch("matrix orders differ".into()));
        }
        let n = self.n();
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n).fold(EpsRational::zero(), |acc, l| {
                            if self.rows[i][l].is_zero() || other.rows[l][j].is_zero() {
                                acc
                            } else {
                                &acc + &(&self.rows[i][l] * &other.rows[l][j])
                            }
                        })
                    })
                    .collect()
            })
            .collect();
        Ok(RealMatrix { rows })
    }

    /// Rows and columns rearranged: entry `(i, j)` becomes the old `(row_perm[i], col_perm[j])`.
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> RealMatrix {
        RealMatrix {
            rows: row_perm
                .iter()
                .map(|&r| col_perm.iter().map(|&c| self.rows[r][c].clone()).collect())
                .collect(),
        }
    }

    pub fn scaled(&self, c: &EpsRational) -> RealMatrix {
        RealMatrix {
            rows: self.rows.iter().map(|r| r.iter().map(|x| x * c).collect()).collect(),
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Vec<Vec<EpsRational>> {
        rows.iter()
            .map(|&r| cols.iter().map(|&c| self.rows[r][c].clone()).collect())
            .collect()
    }

    /// Minor on the given 0-based rows and columns, by fraction-free elimination.
    /// The empty minor is 1.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Result<EpsRational> {
        check_indices(self.n(), rows, cols)?;
        Ok(bareiss_det(self.submatrix(rows, cols)))
    }

    /// Reference minor by direct Leibniz expansion.
    pub fn minor_leibniz(&self, rows: &[usize], cols: &[usize]) -> Result<EpsRational> {
        check_indices(self.n(), rows, cols)?;
        let k = rows.len();
        let mut total = EpsRational::zero();
        for (perm, sign) in permutations(k) {
            let mut term = EpsRational::one();
            for (i, &p) in perm.iter().enumerate() {
                term = &term * &self.rows[rows[i]][cols[p]];
                if term.is_zero() {
                    break;
                }
            }
            total = if sign > 0 { &total + &term } else { &total - &term };
        }
        Ok(total)
    }

    /// Leading principal minor `m_k` (with `m_0 = 1`).
    pub fn leading_minor(&self, k: usize) -> EpsRational {
        let idx: Vec<usize> = (0..k).collect();
        bareiss_det(self.submatrix(&idx, &idx))
    }

    pub fn det(&self) -> EpsRational {
        self.leading_minor(self.n())
    }

    /// Exact inverse by Gauss-Jordan elimination over the field of rational functions.
    pub fn inverse(&self) -> Result<RealMatrix> {
        let n = self.n();
        let mut a = self.rows.clone();
        let mut inv = Self::identity(n).rows;
        for k in 0..n {
            let p = (k..n).find(|&i| !a[i][k].is_zero()).ok_or(Error::Singular)?;
            a.swap(k, p);
            inv.swap(k, p);
            let piv = a[k][k].recip()?;
            for j in 0..n {
                a[k][j] = &a[k][j] * &piv;
                inv[k][j] = &inv[k][j] * &piv;
            }
            for i in 0..n {
                if i == k || a[i][k].is_zero() {
                    continue;
                }
                let f = a[i][k].clone();
                for j in 0..n {
                    let d = &f * &a[k][j];
                    a[i][j] = &a[i][j] - &d;
                    let d = &f * &inv[k][j];
                    inv[i][j] = &inv[i][j] - &d;
                }
            }
        }
        Ok(RealMatrix { rows: inv })
    }

    pub fn to_ext(&self) -> ExtMatrix {
        ExtMatrix {
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|x| ExternalNumber::real(x.clone())).collect())
                .collect(),
        }
    }

    pub fn is_limited(&self) -> bool {
        self.rows.iter().flatten().all(|x| x.is_limited())
    }
}

impl fmt::Display for RealMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                f.write_str(";\n")?;
            }
            let cells: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            f.write_str(&cells.join(", "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for RealMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RealMatrix[{self}]")
    }
}

fn bareiss_det(mut m: Vec<Vec<EpsRational>>) -> EpsRational {
    let k = m.len();
    if k == 0 {
        return EpsRational::one();
    }
    let mut sign = 1;
    let mut prev = EpsRational::one();
    for c in 0..k {
        if m[c][c].is_zero() {
            match (c + 1..k).find(|&r| !m[r][c].is_zero()) {
                Some(r) => {
                    m.swap(c, r);
                    sign = -sign;
                }
                None => return EpsRational::zero(),
            }
        }
        for i in c + 1..k {
            for j in c + 1..k {
                let num = &(&m[i][j] * &m[c][c]) - &(&m[i][c] * &m[c][j]);
                m[i][j] = num.div(&prev).expect("previous pivot is nonzero");
            }
        }
        prev = m[c][c].clone();
    }
    let d = m[k - 1][k - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// Result of [`properly_arrange`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrangement {
    /// Position `i` of the arranged matrix holds original row `row_perm[i]`.
    pub row_perm: Vec<usize>,
    pub col_perm: Vec<usize>,
    pub matrix: RealMatrix,
}

impl Arrangement {
    pub fn is_identity(&self) -> bool {
        self.row_perm.iter().enumerate().all(|(i, &r)| i == r)
            && self.col_perm.iter().enumerate().all(|(i, &c)| i == c)
    }
}

/// Greedy complete pivoting on successive Schur complements; ties go to the
/// smallest (row, column).
pub fn properly_arrange(p: &RealMatrix) -> Result<Arrangement> {
    let n = p.n();
    let mut s = p.rows.clone();
    let mut row_perm: Vec<usize> = (0..n).collect();
    let mut col_perm: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let mut best: Option<(usize, usize)> = None;
        for i in k..n {
            for j in k..n {
                if s[i][j].is_zero() {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((bi, bj)) => s[i][j].compare_abs(&s[bi][bj]) == Ordering::Greater,
                };
                if better {
                    best = Some((i, j));
                }
            }
        }
        let (bi, bj) = best.ok_or(Error::Singular)?;
        s.swap(k, bi);
        row_perm.swap(k, bi);
        for row in s.iter_mut() {
            row.swap(k, bj);
        }
        col_perm.swap(k, bj);
        let piv = s[k][k].recip()?;
        for i in k + 1..n {
            if s[i][k].is_zero() {
                continue;
            }
            let f = &s[i][k] * &piv;
            for j in k..n {
                let d = &f * &s[k][j];
                s[i][j] = &s[i][j] - &d;
            }
        }
    }
    let matrix = p.permuted(&row_perm, &col_perm);
    Ok(Arrangement {
        row_perm,
        col_perm,
        matrix,
    })
}

/// Both conditions of proper arrangement, checked on minors directly.
pub fn is_properly_arranged(p: &RealMatrix) -> Verdict {
    let n = p.n();
    let a11 = p.get(0, 0);
    for i in 0..n {
        for j in 0..n {
            if p.get(i, j).compare_abs(a11) == Ordering::Greater {
                return Err(Violation::at(i, j, format!("|{}| > |a11| = |{}|", p.get(i, j), a11)));
            }
        }
    }
    for k in 1..n {
        let m_next = p.leading_minor(k + 1);
        for i in k..n {
            for j in k..n {
                let mut rows: Vec<usize> = (0..k).collect();
                let mut cols: Vec<usize> = (0..k).collect();
                rows.push(i);
                cols.push(j);
                let m = p.minor(&rows, &cols).expect("valid indices");
                if m.compare_abs(&m_next) == Ordering::Greater {
                    return Err(Violation::at(
                        i,
                        j,
                        format!("bordered minor of order {} is {m}, exceeding m{} = {m_next}", k + 1, k + 1),
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Every leading principal minor is nonzero.
pub fn is_diagonally_eliminable(p: &RealMatrix) -> Verdict {
    for k in 1..=p.n() {
        if p.leading_minor(k).is_zero() {
            return Err(Violation::at(k - 1, k - 1, format!("m{k} = 0")));
        }
    }
    Ok(())
}

/// `p11 = 1` and every entry is at most 1 in absolute value.
pub fn is_reduced_representative(p: &RealMatrix) -> Verdict {
    if !p.get(0, 0).is_one() {
        return Err(Violation::at(0, 0, format!("a11 = {} is not 1", p.get(0, 0))));
    }
    let one = EpsRational::one();
    for i in 0..p.n() {
        for j in 0..p.n() {
            if p.get(i, j).compare_abs(&one) == Ordering::Greater {
                return Err(Violation::at(i, j, format!("|{}| > 1", p.get(i, j))));
            }
        }
    }
    Ok(())
}

/// External vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExtVector {
    entries: Vec<ExternalNumber>,
}

impl ExtVector {
    pub fn new(entries: Vec<ExternalNumber>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::ShapeMismatch("empty vector".into()));
        }
        Ok(ExtVector { entries })
    }

    pub fn from_reals(xs: &[EpsRational]) -> Self {
        ExtVector {
            entries: xs.iter().map(|x| ExternalNumber::real(x.clone())).collect(),
        }
    }

    pub fn uniform_neutrix(n: usize, neutrix: Neutrix) -> Self {
        ExtVector {
            entries: vec![ExternalNumber::neutricial(neutrix); n],
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> &ExternalNumber {
        &self.entries[i]
    }

    pub fn entries(&self) -> &[ExternalNumber] {
        &self.entries
    }

    pub fn representative(&self) -> Vec<EpsRational> {
        self.entries.iter().map(|e| e.rep().clone()).collect()
    }

    pub fn neutrices(&self) -> Vec<Neutrix> {
        self.entries.iter().map(|e| e.neutrix()).collect()
    }

    /// `β̄`, the largest `|β_i|`.
    pub fn max_abs(&self) -> ExternalNumber {
        self.entries
            .iter()
            .map(|e| e.abs())
            .reduce(|a, b| ExternalNumber::max_of(&a, &b))
            .expect("nonempty")
    }

    /// `B̲`, the smallest neutrix.
    pub fn min_neutrix(&self) -> Neutrix {
        self.entries.iter().map(|e| e.neutrix()).min().expect("nonempty")
    }

    pub fn max_neutrix(&self) -> Neutrix {
        self.entries.iter().map(|e| e.neutrix()).max().expect("nonempty")
    }

    pub fn is_uniform(&self) -> bool {
        self.min_neutrix() == self.max_neutrix()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.entries.iter().all(|e| e.is_neutricial())
    }

    /// `R(B)`: `B̲/β̄` when `β̄` is zeroless, else `B̲:N(β̄)`.
    pub fn relative_uncertainty(&self) -> Result<MagnitudeClass> {
        let top = self.max_abs();
        let low = self.min_neutrix();
        if top.is_zeroless() {
            Ok(low.scalar_div(top.rep())?.into())
        } else {
            low.quotient(top.neutrix())
        }
    }

    pub fn is_subset(&self, other: &ExtVector) -> bool {
        self.len() == other.len()
            && self.entries.iter().zip(&other.entries).all(|(a, b)| a.is_subset(b))
    }

    /// Entry `i` becomes the old entry `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> ExtVector {
        ExtVector {
            entries: perm.iter().map(|&i| self.entries[i].clone()).collect(),
        }
    }

    /// Inverse of [`ExtVector::permuted`].
    pub fn unpermuted(&self, perm: &[usize]) -> ExtVector {
        let mut entries = self.entries.clone();
        for (i, &p) in perm.iter().enumerate() {
            entries[p] = self.entries[i].clone();
        }
        ExtVector { entries }
    }

    pub fn scaled(&self, c: &EpsRational) -> ExtVector {
        ExtVector {
            entries: self.entries.iter().map(|e| e.scale(c)).collect(),
        }
    }

    pub fn with_neutrix(&self, neutrix: Neutrix) -> ExtVector {
        ExtVector {
            entries: self
                .entries
                .iter()
                .map(|e| ExternalNumber::new(e.rep().clone(), neutrix))
                .collect(),
        }
    }

    pub fn neutricial_part(&self) -> ExtVector {
        ExtVector {
            entries: self
                .entries
                .iter()
                .map(|e| ExternalNumber::neutricial(e.neutrix()))
                .collect(),
        }
    }
}

impl fmt::Display for ExtVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.entries.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", cells.join(", "))
    }
}

impl fmt::Debug for ExtVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExtVector{self}")
    }
}

/// Square matrix of external numbers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExtMatrix {
    rows: Vec<Vec<ExternalNumber>>,
}

impl ExtMatrix {
    pub fn new(rows: Vec<Vec<ExternalNumber>>) -> Result<Self> {
        check_square(&rows)?;
        Ok(ExtMatrix { rows })
    }

    pub fn identity(n: usize) -> Self {
        RealMatrix::identity(n).to_ext()
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &ExternalNumber {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<ExternalNumber>] {
        &self.rows
    }

    /// The canonical representative matrix `P`.
    pub fn representative(&self) -> RealMatrix {
        RealMatrix {
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|e| e.rep().clone()).collect())
                .collect(),
        }
    }

    pub fn neutrices(&self) -> Vec<Vec<Neutrix>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|e| e.neutrix()).collect())
            .collect()
    }

    /// `Ā`, the largest entry neutrix.
    pub fn max_neutrix(&self) -> Neutrix {
        self.rows.iter().flatten().map(|e| e.neutrix()).max().expect("nonempty")
    }

    /// Whether `p` is a representative matrix of this matrix.
    pub fn has_representative(&self, p: &RealMatrix) -> bool {
        p.n() == self.n()
            && (0..self.n()).all(|i| (0..self.n()).all(|j| self.rows[i][j].contains(p.get(i, j))))
    }

    /// Leibniz determinant in external arithmetic.
    pub fn det(&self) -> Result<ExternalNumber> {
        let n = self.n();
        if n > MAX_LEIBNIZ_ORDER {
            return Err(Error::SizeExceeded {
                n,
                max: MAX_LEIBNIZ_ORDER,
            });
        }
        let mut total = ExternalNumber::zero();
        for (perm, sign) in permutations(n) {
            let mut term = ExternalNumber::one();
            for (i, &p) in perm.iter().enumerate() {
                term = &term * &self.rows[i][p];
            }
            total = if sign > 0 { &total + &term } else { &total - &term };
        }
        Ok(total)
    }

    /// Signed cofactor `Δ_{i,j}` (0-based).
    pub fn cofactor(&self, i: usize, j: usize) -> Result<ExternalNumber> {
        let n = self.n();
        if n == 1 {
            return Ok(ExternalNumber::one());
        }
        let rows: Vec<Vec<ExternalNumber>> = (0..n)
            .filter(|&r| r != i)
            .map(|r| (0..n).filter(|&c| c != j).map(|c| self.rows[r][c].clone()).collect())
            .collect();
        let d = ExtMatrix { rows }.det()?;
        Ok(if (i + j) % 2 == 0 { d } else { -d })
    }

    /// `R(A) = Ā/Δ`.
    pub fn relative_uncertainty(&self) -> Result<MagnitudeClass> {
        let delta = self.det()?;
        if !delta.is_zeroless() {
            return Err(Error::Singular);
        }
        Ok(self.max_neutrix().scalar_div(delta.rep())?.into())
    }

    pub fn is_limited(&self) -> bool {
        self.rows.iter().flatten().all(|e| e.is_limited())
    }

    pub fn is_reduced(&self) -> Verdict {
        let a11 = &self.rows[0][0];
        if !a11.contains(&EpsRational::one()) {
            return Err(Violation::at(0, 0, format!("{a11} does not contain 1")));
        }
        if a11.neutrix() > Neutrix::OSLASH {
            return Err(Violation::at(0, 0, format!("neutrix of {a11} is not infinitesimal")));
        }
        let one = EpsRational::one();
        for (i, r) in self.rows.iter().enumerate() {
            for (j, e) in r.iter().enumerate() {
                let excess = &e.rep().abs() - &one;
                if excess.signum() > 0 && !e.neutrix().contains(&excess) {
                    return Err(Violation::at(i, j, format!("no representative of {e} is within [-1, 1]")));
                }
            }
        }
        Ok(())
    }

    /// Identity representative and every neutrix inside `⊘`.
    pub fn is_near_identity(&self) -> Verdict {
        for (i, r) in self.rows.iter().enumerate() {
            for (j, e) in r.iter().enumerate() {
                let target = if i == j { EpsRational::one() } else { EpsRational::zero() };
                if !e.contains(&target) {
                    return Err(Violation::at(i, j, format!("{e} does not contain {target}")));
                }
                if e.neutrix() > Neutrix::OSLASH {
                    return Err(Violation::at(i, j, format!("neutrix of {e} is not infinitesimal")));
                }
            }
        }
        Ok(())
    }

    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> ExtMatrix {
        ExtMatrix {
            rows: row_perm
                .iter()
                .map(|&r| col_perm.iter().map(|&c| self.rows[r][c].clone()).collect())
                .collect(),
        }
    }

    pub fn scaled(&self, c: &EpsRational) -> ExtMatrix {
        ExtMatrix {
            rows: self.rows.iter().map(|r| r.iter().map(|e| e.scale(c)).collect()).collect(),
        }
    }

    pub fn with_column(&self, j: usize, v: &ExtVector) -> Result<ExtMatrix> {
        if v.len() != self.n() || j >= self.n() {
            return Err(Error::ShapeMismatch("column replacement".into()));
        }
        let mut rows = self.rows.clone();
        for (i, r) in rows.iter_mut().enumerate() {
            r[j] = v.get(i).clone();
        }
        Ok(ExtMatrix { rows })
    }

    /// Entrywise inclusion.
    pub fn is_subset(&self, other: &ExtMatrix) -> bool {
        self.n() == other.n()
            && self
                .rows
                .iter()
                .flatten()
                .zip(other.rows.iter().flatten())
                .all(|(a, b)| a.is_subset(b))
    }

    /// Minkowski product.
    pub fn mul(&self, other: &ExtMatrix) -> Result<ExtMatrix> {
        if self.n() != other.n() {
            return Err(Error::ShapeMismatch("matrix orders differ".into()));
        }
        let n = self.n();
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n).fold(ExternalNumber::zero(), |acc, l| {
                            &acc + &(&self.rows[i][l] * &other.rows[l][j])
                        })
                    })
                    .collect()
            })
            .collect();
        Ok(ExtMatrix { rows })
    }

    pub fn mul_vec(&self, v: &ExtVector) -> Result<ExtVector> {
        if self.n() != v.len() {
            return Err(Error::ShapeMismatch(format!(
                "matrix of order {} times vector of length {}",
                self.n(),
                v.len()
            )));
        }
        let entries = self
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .zip(v.entries())
                    .fold(ExternalNumber::zero(), |acc, (a, x)| &acc + &(a * x))
            })
            .collect();
        Ok(ExtVector { entries })
    }
}

/// Real matrix times external matrix.
pub fn real_mul(g: &RealMatrix, a: &ExtMatrix) -> Result<ExtMatrix> {
    if g.n() != a.n() {
        return Err(Error::ShapeMismatch("matrix orders differ".into()));
    }
    let n = g.n();
    let rows = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..n).fold(ExternalNumber::zero(), |acc, l| {
                        if g.get(i, l).is_zero() {
                            acc
                        } else {
                            &acc + &a.get(l, j).scale(g.get(i, l))
                        }
                    })
                })
                .collect()
        })
        .collect();
    Ok(ExtMatrix { rows })
}

/// Real matrix times external vector.
pub fn real_mul_vec(g: &RealMatrix, v: &ExtVector) -> Result<ExtVector> {
    if g.n() != v.len() {
        return Err(Error::ShapeMismatch("matrix and vector sizes differ".into()));
    }
    let entries = (0..g.n())
        .map(|i| {
            (0..g.n()).fold(ExternalNumber::zero(), |acc, l| {
                if g.get(i, l).is_zero() {
                    acc
                } else {
                    &acc + &v.get(l).scale(g.get(i, l))
                }
            })
        })
        .collect();
    Ok(ExtVector { entries })
}

impl fmt::Display for ExtMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                f.write_str(";\n")?;
            }
            let cells: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            f.write_str(&cells.join(", "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for ExtMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExtMatrix[{self}]")
    }
}
