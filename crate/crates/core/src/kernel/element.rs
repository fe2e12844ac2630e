use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;

use super::structure::{AtomId, CaAtomStructure, RaAtomStructure};
use crate::error::{Error, Result};

/// An element of a complex algebra: a set of atoms of one carrier.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Element {
    carrier: u64,
    atoms: FixedBitSet,
}

impl Element {
    pub fn carrier_id(&self) -> u64 {
        self.carrier
    }

    pub fn atoms(&self) -> &FixedBitSet {
        &self.atoms
    }

    pub fn into_atoms(self) -> FixedBitSet {
        self.atoms
    }

    pub fn contains(&self, a: AtomId) -> bool {
        self.atoms.contains(a as usize)
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_clear()
    }

    pub fn len(&self) -> usize {
        self.atoms.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn is_subset(&self, other: &Element) -> bool {
        self.atoms.is_subset(&other.atoms)
    }

    pub fn iter(&self) -> impl Iterator<Item = AtomId> + '_ {
        self.atoms.ones().map(|a| a as AtomId)
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.atoms.ones()).finish()
    }
}

/// Operator tags of the CA and RA signatures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Operator {
    Zero,
    One,
    Join,
    Meet,
    Complement,
    Cyl(usize),
    Diag(usize, usize),
    Compose,
    Converse,
    Identity,
}

impl Operator {
    pub fn arity(self) -> usize {
        match self {
            Operator::Zero | Operator::One | Operator::Diag(..) | Operator::Identity => 0,
            Operator::Complement | Operator::Cyl(_) | Operator::Converse => 1,
            Operator::Join | Operator::Meet | Operator::Compose => 2,
        }
    }

    pub fn is_boolean(self) -> bool {
        matches!(
            self,
            Operator::Zero | Operator::One | Operator::Join | Operator::Meet | Operator::Complement
        )
    }
}

impl FromStr for Operator {
    type Err = Error;

    /// Accepts `0 1 + * - ; ~ 1'`, `join meet not compose converse id`, `cI` and `dIJ`.
    fn from_str(s: &str) -> Result<Self> {
        let op = match s {
            "0" | "zero" => Operator::Zero,
            "1" | "one" => Operator::One,
            "+" | "join" => Operator::Join,
            "*" | "meet" => Operator::Meet,
            "-" | "not" | "complement" => Operator::Complement,
            ";" | "compose" => Operator::Compose,
            "~" | "converse" => Operator::Converse,
            "1'" | "id" | "identity" => Operator::Identity,
            _ => {
                let digits = |t: &str| t.parse::<usize>().ok();
                if let Some(rest) = s.strip_prefix('c').and_then(digits) {
                    Operator::Cyl(rest)
                } else if let Some(rest) = s.strip_prefix('d') {
                    let parts: Vec<&str> = if rest.contains(',') {
                        rest.split(',').collect()
                    } else if rest.len() == 2 {
                        vec![&rest[..1], &rest[1..]]
                    } else {
                        vec![]
                    };
                    match parts.as_slice() {
                        [i, j] => match (digits(i), digits(j)) {
                            (Some(i), Some(j)) => Operator::Diag(i, j),
                            _ => return Err(Error::usage(format!("unknown operator {s:?}"))),
                        },
                        _ => return Err(Error::usage(format!("unknown operator {s:?}"))),
                    }
                } else {
                    return Err(Error::usage(format!("unknown operator {s:?}")));
                }
            }
        };
        Ok(op)
    }
}

/// Complex algebra over a finite atom structure.
pub trait ComplexAlgebra {
    fn carrier_id(&self) -> u64;
    fn size(&self) -> usize;
    /// Evaluate a non-Boolean operator on atom sets; arity and index checks are done.
    fn apply_extra(&self, op: Operator, args: &[&FixedBitSet]) -> Result<FixedBitSet>;

    fn element(&self, atoms: impl IntoIterator<Item = AtomId>) -> Element
    where
        Self: Sized,
    {
        let mut bits = FixedBitSet::with_capacity(self.size());
        for a in atoms {
            bits.insert(a as usize);
        }
        Element {
            carrier: self.carrier_id(),
            atoms: bits,
        }
    }

    fn element_from_bits(&self, bits: FixedBitSet) -> Result<Element> {
        if bits.len() != self.size() {
            return Err(Error::structural("bitset length differs from atom count"));
        }
        Ok(Element {
            carrier: self.carrier_id(),
            atoms: bits,
        })
    }

    fn zero(&self) -> Element {
        Element {
            carrier: self.carrier_id(),
            atoms: FixedBitSet::with_capacity(self.size()),
        }
    }

    fn one(&self) -> Element {
        let mut atoms = FixedBitSet::with_capacity(self.size());
        atoms.insert_range(..);
        Element {
            carrier: self.carrier_id(),
            atoms,
        }
    }

    fn apply(&self, op: Operator, args: &[&Element]) -> Result<Element> {
        if args.len() != op.arity() {
            return Err(Error::usage(format!(
                "operator {op:?} takes {} arguments, got {}",
                op.arity(),
                args.len()
            )));
        }
        if let Some(bad) = args.iter().find(|e| e.carrier != self.carrier_id()) {
            return Err(Error::structural(format!(
                "element of carrier {} passed to carrier {}",
                bad.carrier,
                self.carrier_id()
            )));
        }
        let bits = match op {
            Operator::Zero => FixedBitSet::with_capacity(self.size()),
            Operator::One => {
                let mut b = FixedBitSet::with_capacity(self.size());
                b.insert_range(..);
                b
            }
            Operator::Join => {
                let mut b = args[0].atoms.clone();
                b.union_with(&args[1].atoms);
                b
            }
            Operator::Meet => {
                let mut b = args[0].atoms.clone();
                b.intersect_with(&args[1].atoms);
                b
            }
            Operator::Complement => {
                let mut b = args[0].atoms.clone();
                b.toggle_range(..);
                b
            }
            _ => {
                let raw: Vec<&FixedBitSet> = args.iter().map(|e| &e.atoms).collect();
                self.apply_extra(op, &raw)?
            }
        };
        Ok(Element {
            carrier: self.carrier_id(),
            atoms: bits,
        })
    }
}

impl ComplexAlgebra for CaAtomStructure {
    fn carrier_id(&self) -> u64 {
        CaAtomStructure::carrier_id(self)
    }

    fn size(&self) -> usize {
        self.atom_count()
    }

    fn apply_extra(&self, op: Operator, args: &[&FixedBitSet]) -> Result<FixedBitSet> {
        let n = self.dimension();
        match op {
            Operator::Cyl(i) if i < n => Ok(self.cyl(i).preimage(args[0])),
            Operator::Diag(i, j) if i < n && j < n => Ok(self.diag(i, j)),
            Operator::Cyl(_) | Operator::Diag(..) => Err(Error::usage(format!(
                "operator {op:?} index out of range for dimension {n}"
            ))),
            _ => Err(Error::usage(format!("operator {op:?} not in the CA signature"))),
        }
    }
}

impl ComplexAlgebra for RaAtomStructure {
    fn carrier_id(&self) -> u64 {
        RaAtomStructure::carrier_id(self)
    }

    fn size(&self) -> usize {
        self.atom_count()
    }

    fn apply_extra(&self, op: Operator, args: &[&FixedBitSet]) -> Result<FixedBitSet> {
        match op {
            Operator::Compose => Ok(self.compose_sets(args[0], args[1])),
            Operator::Converse => {
                let mut out = FixedBitSet::with_capacity(self.atom_count());
                for a in args[0].ones() {
                    out.insert(self.converse(a as AtomId) as usize);
                }
                Ok(out)
            }
            Operator::Identity => Ok(self.identity().clone()),
            _ => Err(Error::usage(format!("operator {op:?} not in the RA signature"))),
        }
    }
}

/// Free-function form of [`ComplexAlgebra::apply`].
pub fn apply_operator<A: ComplexAlgebra>(s: &A, op: Operator, args: &[&Element]) -> Result<Element> {
    s.apply(op, args)
}
