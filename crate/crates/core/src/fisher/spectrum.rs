use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering as CmpOrdering;

use crate::error::{domain, Error, Result};

/// Opaque mode label.
///
/// Generic problems number their modes; the electromagnetic example labels
/// each `(τ, l)` shell, with the `2l+1` values of `m` carried as multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    Index(usize),
    Mode { tau: u8, l: usize },
}

impl Label {
    /// Group key used when aggregating series increments: the multipole
    /// order for `Mode` labels and the index itself otherwise.
    pub fn shell(&self) -> usize {
        match *self {
            Label::Index(i) => i,
            Label::Mode { l, .. } => l,
        }
    }
}

impl Ord for Label {
    /// Indices first, then modes by increasing `l` and then `τ`.
    fn cmp(&self, other: &Self) -> CmpOrdering {
        match (self, other) {
            (Label::Index(a), Label::Index(b)) => a.cmp(b),
            (Label::Index(_), Label::Mode { .. }) => CmpOrdering::Less,
            (Label::Mode { .. }, Label::Index(_)) => CmpOrdering::Greater,
            (Label::Mode { tau: ta, l: la }, Label::Mode { tau: tb, l: lb }) => {
                (la, ta).cmp(&(lb, tb))
            }
        }
    }
}

impl PartialOrd for Label {
    fn partial_cmp(&self, other: &Self) -> Option<CmpOrdering> {
        Some(self.cmp(other))
    }
}

impl core::fmt::Display for Label {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Label::Index(i) => write!(f, "#{i}"),
            Label::Mode { tau, l } => write!(f, "(tau={tau}, l={l})"),
        }
    }
}

/// Iteration order of a [`ModalSpectrum`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Ordering {
    /// Ascending [`Label`] order.
    #[default]
    ByLabel,
    /// Descending value; ties keep label order.
    ByValueDesc,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Entry {
    pub label: Label,
    pub value: f64,
    pub multiplicity: u32,
}

impl Entry {
    pub fn new(label: Label, value: f64, multiplicity: u32) -> Self {
        Self {
            label,
            value,
            multiplicity,
        }
    }
}

/// Nonnegative modal values with multiplicities, iterated in the order named
/// by its [`Ordering`] tag.
#[derive(Debug, Clone, PartialEq)]
pub struct ModalSpectrum {
    entries: Vec<Entry>,
    ordering: Ordering,
}

impl ModalSpectrum {
    /// Validates and sorts `entries`. Labels must be unique.
    pub fn new(mut entries: Vec<Entry>, ordering: Ordering) -> Result<Self> {
        for e in &entries {
            if !(e.value >= 0.0) || !e.value.is_finite() {
                return Err(domain!("spectrum value for {} must be finite and >= 0, got {}", e.label, e.value));
            }
            if e.multiplicity == 0 {
                return Err(domain!("multiplicity for {} must be >= 1", e.label));
            }
        }
        entries.sort_by_key(|e| e.label);
        if let Some(w) = entries.windows(2).find(|w| w[0].label == w[1].label) {
            return Err(Error::Pairing(alloc::format!("duplicate label {}", w[0].label)));
        }
        let mut s = Self {
            entries,
            ordering: Ordering::ByLabel,
        };
        s.reorder(ordering);
        Ok(s)
    }

    /// Multiplicity-one spectrum labelled `Index(0)`, `Index(1)`, ... in the
    /// given order.
    pub fn from_values(values: &[f64]) -> Result<Self> {
        let entries = values
            .iter()
            .enumerate()
            .map(|(i, &v)| Entry::new(Label::Index(i), v, 1))
            .collect();
        Self::new(entries, Ordering::ByLabel)
    }

    fn reorder(&mut self, ordering: Ordering) {
        match ordering {
            Ordering::ByLabel => self.entries.sort_by_key(|e| e.label),
            Ordering::ByValueDesc => self
                .entries
                .sort_by(|a, b| b.value.total_cmp(&a.value).then(a.label.cmp(&b.label))),
        }
        self.ordering = ordering;
    }

    pub fn with_ordering(mut self, ordering: Ordering) -> Self {
        self.reorder(ordering);
        self
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn ordering(&self) -> Ordering {
        self.ordering
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of modes counting multiplicity.
    pub fn total_multiplicity(&self) -> usize {
        self.entries.iter().map(|e| e.multiplicity as usize).sum()
    }

    pub fn get(&self, label: Label) -> Option<&Entry> {
        self.entries.iter().find(|e| e.label == label)
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries.iter().map(|e| e.value)
    }

    /// Values with each entry repeated `multiplicity` times.
    pub fn expanded(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries
            .iter()
            .flat_map(|e| core::iter::repeat(e.value).take(e.multiplicity as usize))
    }

    /// Applies `f` to every value, keeping labels, multiplicities and order.
    pub fn map_values(&self, mut f: impl FnMut(&Entry) -> f64) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .map(|e| Entry::new(e.label, f(e), e.multiplicity))
            .collect();
        Self::new(entries, self.ordering)
    }

    /// Entries of `self` paired with the entry of `other` carrying the same
    /// label, in the order of `self`.
    pub fn pair_with<'a>(&'a self, other: &'a ModalSpectrum) -> Result<Vec<(&'a Entry, &'a Entry)>> {
        if self.len() != other.len() {
            return Err(Error::Pairing(alloc::format!(
                "spectra have {} and {} entries",
                self.len(),
                other.len()
            )));
        }
        let lookup: BTreeMap<Label, &Entry> = other.entries.iter().map(|e| (e.label, e)).collect();
        self.entries
            .iter()
            .map(|a| {
                let b = lookup
                    .get(&a.label)
                    .ok_or_else(|| Error::Pairing(alloc::format!("label {} missing from partner spectrum", a.label)))?;
                if a.multiplicity != b.multiplicity {
                    return Err(Error::Pairing(alloc::format!(
                        "label {}: multiplicities {} and {} differ",
                        a.label,
                        a.multiplicity,
                        b.multiplicity
                    )));
                }
                Ok((a, *b))
            })
            .collect()
    }
}

/// Whether the parameter space is real or complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScalarField {
    Real,
    #[default]
    Complex,
}

impl ScalarField {
    /// Factor `c` in `μ̃ = c σ²/λ`.
    pub fn factor(self) -> f64 {
        match self {
            ScalarField::Real => 2.0,
            ScalarField::Complex => 1.0,
        }
    }
}

/// Eigenvalues `μ̃ᵢ` of the Fisher information operator.
#[derive(Debug, Clone, PartialEq)]
pub struct FisherSpectrum {
    mu: ModalSpectrum,
    field: ScalarField,
}

impl FisherSpectrum {
    /// Wraps a spectrum of Fisher eigenvalues; all values must be positive.
    pub fn new(mu: ModalSpectrum, field: ScalarField) -> Result<Self> {
        if let Some(e) = mu.entries().iter().find(|e| !(e.value > 0.0)) {
            return Err(domain!("Fisher eigenvalue for {} must be > 0, got {}", e.label, e.value));
        }
        Ok(Self { mu, field })
    }

    pub fn spectrum(&self) -> &ModalSpectrum {
        &self.mu
    }

    pub fn entries(&self) -> &[Entry] {
        self.mu.entries()
    }

    pub fn field(&self) -> ScalarField {
        self.field
    }

    pub fn with_ordering(self, ordering: Ordering) -> Self {
        Self {
            mu: self.mu.with_ordering(ordering),
            field: self.field,
        }
    }
}

/// `μ̃ᵢ = c σᵢ²/λᵢ` with `c = 2` for real and `1` for complex parameters.
///
/// `sigma` holds singular values (not their squares). Modes with `σᵢ = 0`
/// span the null space and are dropped. The result follows the order of
/// `sigma`.
pub fn fisher_eigenvalues(
    sigma: &ModalSpectrum,
    lambda: &ModalSpectrum,
    field: ScalarField,
) -> Result<FisherSpectrum> {
    let mut entries = Vec::with_capacity(sigma.len());
    for (s, l) in sigma.pair_with(lambda)? {
        if s.value == 0.0 {
            continue;
        }
        if l.value == 0.0 {
            return Err(Error::SingularNoise(alloc::format!(
                "lambda = 0 at {} where sigma = {}",
                s.label,
                s.value
            )));
        }
        let mu = field.factor() * s.value * s.value / l.value;
        entries.push(Entry::new(s.label, mu, s.multiplicity));
    }
    let mu = ModalSpectrum {
        entries,
        ordering: sigma.ordering(),
    };
    FisherSpectrum::new(mu, field)
}
