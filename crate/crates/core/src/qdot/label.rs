use std::fmt;

/// Radial and azimuthal quantum numbers of a planar state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateLabel {
    pub k: usize,
    pub m: i64,
}

const ORBITAL_LETTERS: &[u8] = b"spdfghiklmnoqrtuv";

impl StateLabel {
    pub fn new(k: usize, m: i64) -> Self {
        Self { k, m }
    }

    /// Principal-like number `k + |m| + 1`.
    pub fn shell(&self) -> u64 {
        self.k as u64 + self.m.unsigned_abs() + 1
    }

    /// Spectroscopic name, e.g. `(1,-2)` is `4d-`, `(2,0)` is `3s`.
    pub fn name(&self) -> String {
        let l = self.m.unsigned_abs() as usize;
        let letter = ORBITAL_LETTERS.get(l).map_or('?', |&c| c as char);
        let sign = match self.m.signum() {
            1 => "+",
            -1 => "-",
            _ => "",
        };
        format!("{}{}{}", self.shell(), letter, sign)
    }

    /// `(k,m)`, the form used in CSV labels.
    pub fn tuple(&self) -> String {
        format!("({},{})", self.k, self.m)
    }
}

impl fmt::Display for StateLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// Quantum numbers of a two-electron level: relative motion `(k,m)` and
/// centre of mass `(K,M)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TwoElectronState {
    pub rm: StateLabel,
    pub cm_k: usize,
    pub cm_m: i64,
}

impl TwoElectronState {
    pub fn new(k: usize, m: i64, cm_k: usize, cm_m: i64) -> Self {
        Self {
            rm: StateLabel::new(k, m),
            cm_k,
            cm_m,
        }
    }

    /// Pauli rule: even relative `m` is a singlet, odd a triplet.
    pub fn spin(&self) -> u8 {
        spin_of(self.rm.m)
    }

    /// Tie-break key `(k, |m|, m, K, |M|, M)`.
    pub fn sort_key(&self) -> (usize, u64, i64, usize, u64, i64) {
        (
            self.rm.k,
            self.rm.m.unsigned_abs(),
            self.rm.m,
            self.cm_k,
            self.cm_m.unsigned_abs(),
            self.cm_m,
        )
    }
}

/// `s = (1 - (-1)^m) / 2`.
pub fn spin_of(m: i64) -> u8 {
    (m.rem_euclid(2)) as u8
}

impl fmt::Display for TwoElectronState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{};{},{};{})",
            self.rm.k,
            self.rm.m,
            self.cm_k,
            self.cm_m,
            self.spin()
        )
    }
}
