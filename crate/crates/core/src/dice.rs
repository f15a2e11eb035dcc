//! Microstates and macrostate tables for sets of distinguishable dice.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exactmath::ExactNat;

/// Default cap on the number of microstates a single call may visit.
pub const ENUMERATION_CAP: u64 = 10_000_000;

/// What is painted on a face.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Face {
    Number(i64),
    Name(String),
}

impl Face {
    /// Integers become numbered faces, anything else a named one.
    pub fn parse(s: &str) -> Face {
        match s.trim().parse::<i64>() {
            Ok(n) => Face::Number(n),
            Err(_) => Face::Name(s.trim().to_string()),
        }
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Face::Number(n) => write!(f, "{n}"),
            Face::Name(s) => f.write_str(s),
        }
    }
}

/// A single die, described by the labels on its faces in face order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DieSpec {
    labels: Vec<Face>,
}

impl DieSpec {
    /// A die with faces numbered `1..=faces`.
    pub fn numbered(faces: u32) -> Result<Self> {
        if faces == 0 {
            return Err(Error::InvalidArgument("a die needs at least one face".into()));
        }
        Ok(DieSpec { labels: (1..=faces as i64).map(Face::Number).collect() })
    }

    pub fn labelled(labels: Vec<Face>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InvalidArgument("a die needs at least one face".into()));
        }
        Ok(DieSpec { labels })
    }

    pub fn faces(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[Face] {
        &self.labels
    }
}

/// One face per die, in die order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DiceMicrostate(pub Vec<Face>);

impl fmt::Display for DiceMicrostate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, face) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{face}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MacrostateRow<M> {
    pub macrostate: M,
    pub multiplicity: ExactNat,
    pub probability: BigRational,
}

/// Macrostates ordered by label, each with its multiplicity and exact probability.
#[derive(Debug, Clone, PartialEq)]
pub struct MacrostateTable<M> {
    pub rows: Vec<MacrostateRow<M>>,
    pub total: ExactNat,
}

impl<M: PartialEq> MacrostateTable<M> {
    pub fn row(&self, macrostate: &M) -> Option<&MacrostateRow<M>> {
        self.rows.iter().find(|r| r.macrostate == *macrostate)
    }
}

fn microstate_count(dice: &[DieSpec], cap: u64) -> Result<u64> {
    if dice.is_empty() {
        return Err(Error::InvalidArgument("at least one die is required".into()));
    }
    let mut count: u128 = 1;
    for d in dice {
        count = count.saturating_mul(d.faces() as u128);
    }
    if count > cap as u128 {
        return Err(Error::EnumerationCap { count, cap });
    }
    Ok(count as u64)
}

/// Visits every microstate in lexicographic face-index order.
fn for_each_microstate<F>(dice: &[DieSpec], cap: u64, mut visit: F) -> Result<()>
where
    F: FnMut(&[Face]) -> Result<()>,
{
    microstate_count(dice, cap)?;
    let mut index = vec![0usize; dice.len()];
    let mut faces: Vec<Face> = dice.iter().map(|d| d.labels[0].clone()).collect();
    loop {
        visit(&faces)?;
        // Odometer: advance the last die, carrying leftwards.
        let mut pos = dice.len();
        loop {
            if pos == 0 {
                return Ok(());
            }
            pos -= 1;
            index[pos] += 1;
            if index[pos] < dice[pos].faces() {
                faces[pos] = dice[pos].labels[index[pos]].clone();
                break;
            }
            index[pos] = 0;
            faces[pos] = dice[pos].labels[0].clone();
        }
    }
}

pub fn enumerate_microstates(dice: &[DieSpec]) -> Result<Vec<DiceMicrostate>> {
    enumerate_microstates_with_cap(dice, ENUMERATION_CAP)
}

pub fn enumerate_microstates_with_cap(dice: &[DieSpec], cap: u64) -> Result<Vec<DiceMicrostate>> {
    let mut out = Vec::with_capacity(microstate_count(dice, cap)? as usize);
    for_each_microstate(dice, cap, |faces| {
        out.push(DiceMicrostate(faces.to_vec()));
        Ok(())
    })?;
    Ok(out)
}

/// Groups microstates by `mapping` and counts each group.
///
/// A mapping returning `None` on any microstate is a domain error.
pub fn macrostate_table<M, F>(dice: &[DieSpec], mapping: F) -> Result<MacrostateTable<M>>
where
    M: Ord + Clone,
    F: Fn(&[Face]) -> Option<M>,
{
    macrostate_table_with_cap(dice, mapping, ENUMERATION_CAP)
}

pub fn macrostate_table_with_cap<M, F>(
    dice: &[DieSpec],
    mapping: F,
    cap: u64,
) -> Result<MacrostateTable<M>>
where
    M: Ord + Clone,
    F: Fn(&[Face]) -> Option<M>,
{
    let mut counts: BTreeMap<M, u64> = BTreeMap::new();
    for_each_microstate(dice, cap, |faces| {
        let m = mapping(faces)
            .ok_or_else(|| Error::UnmappedMicrostate(DiceMicrostate(faces.to_vec()).to_string()))?;
        *counts.entry(m).or_insert(0) += 1;
        Ok(())
    })?;
    let total: u64 = counts.values().sum();
    let denom = BigInt::from(total);
    let rows = counts
        .into_iter()
        .map(|(macrostate, count)| MacrostateRow {
            macrostate,
            multiplicity: ExactNat::from(count),
            probability: BigRational::new(BigInt::from(count), denom.clone()),
        })
        .collect();
    Ok(MacrostateTable { rows, total: ExactNat::from(total) })
}

/// Sum of the faces; undefined when any face is not a number.
pub fn sum_mapping(faces: &[Face]) -> Option<i64> {
    faces.iter().try_fold(0i64, |acc, f| match f {
        Face::Number(n) => acc.checked_add(*n),
        Face::Name(_) => None,
    })
}

/// The microstate itself, rendered as its space-separated labels.
pub fn identity_mapping(faces: &[Face]) -> Option<String> {
    Some(faces.iter().map(Face::to_string).collect::<Vec<_>>().join(" "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use proptest::prelude::*;
    use std::collections::HashMap;

    fn d(n: u32) -> DieSpec {
        DieSpec::numbered(n).unwrap()
    }

    fn ratio(n: i64, m: i64) -> BigRational {
        BigRational::new(n.into(), m.into())
    }

    #[test]
    fn microstate_counts() {
        assert_eq!(enumerate_microstates(&[d(6), d(6)]).unwrap().len(), 36);
        assert_eq!(enumerate_microstates(&[d(6)]).unwrap().len(), 6);
        assert_eq!(enumerate_microstates(&[d(6), d(8)]).unwrap().len(), 48);
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let states = enumerate_microstates(&[d(2), d(3)]).unwrap();
        let pairs: Vec<(i64, i64)> = states
            .iter()
            .map(|s| match (&s.0[0], &s.0[1]) {
                (Face::Number(a), Face::Number(b)) => (*a, *b),
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(pairs, vec![(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (2, 3)]);
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        let err = enumerate_microstates_with_cap(&[d(6), d(6)], 35).unwrap_err();
        assert!(err.is_resource());
        let many = vec![d(100); 4];
        assert!(enumerate_microstates(&many).unwrap_err().is_resource());
        assert!(macrostate_table(&many, sum_mapping).unwrap_err().is_resource());
        assert!(enumerate_microstates(&[]).is_err());
        assert!(DieSpec::numbered(0).is_err());
    }

    #[test]
    fn two_dice_sum_table() {
        let table = macrostate_table(&[d(6), d(6)], sum_mapping).unwrap();
        let sums: Vec<i64> = table.rows.iter().map(|r| r.macrostate).collect();
        assert_eq!(sums, (2..=12).collect::<Vec<_>>());
        let omegas: Vec<u64> = table.rows.iter().map(|r| r.multiplicity.to_u64().unwrap()).collect();
        assert_eq!(omegas, vec![1, 2, 3, 4, 5, 6, 5, 4, 3, 2, 1]);
        assert_eq!(table.total, 36);
        assert_eq!(table.row(&7).unwrap().probability, ratio(1, 6));
        assert_eq!(table.row(&2).unwrap().probability, ratio(1, 36));
        assert_eq!(table.row(&3).unwrap().probability, ratio(1, 18));
        assert!(table.row(&14).is_none());
        let total: BigRational = table.rows.iter().map(|r| &r.probability).sum();
        assert!(total.is_one());
    }

    #[test]
    fn distinct_animals_give_uniform_table() {
        let animals = ["ant", "bee", "cat", "dog", "eel", "fox", "gnu", "hen", "ibis", "jay", "koi", "lynx"];
        let blue = DieSpec::labelled(animals[..6].iter().map(|a| Face::parse(a)).collect()).unwrap();
        let red = DieSpec::labelled(animals[6..].iter().map(|a| Face::parse(a)).collect()).unwrap();
        let table = macrostate_table(&[blue.clone(), red.clone()], identity_mapping).unwrap();
        assert_eq!(table.rows.len(), 36);
        for row in &table.rows {
            assert_eq!(row.multiplicity, 1);
            assert_eq!(row.probability, ratio(1, 36));
        }
        // Summing animals is meaningless.
        assert!(matches!(
            macrostate_table(&[blue, red], sum_mapping),
            Err(Error::UnmappedMicrostate(_))
        ));
    }

    fn dice_strategy() -> impl Strategy<Value = Vec<u32>> {
        prop::collection::vec(1u32..=12, 1..=4)
    }

    proptest! {
        #[test]
        fn multiplicities_are_conserved(faces in dice_strategy()) {
            let dice: Vec<DieSpec> = faces.iter().map(|&f| d(f)).collect();
            let table = macrostate_table(&dice, sum_mapping).unwrap();
            let product: u64 = faces.iter().map(|&f| f as u64).product();
            let sum: ExactNat = table.rows.iter().map(|r| &r.multiplicity).sum();
            prop_assert_eq!(sum, ExactNat::from(product));
            let p: BigRational = table.rows.iter().map(|r| &r.probability).sum();
            prop_assert!(p.is_one());
        }

        #[test]
        fn matches_brute_force_tally(faces in dice_strategy()) {
            let dice: Vec<DieSpec> = faces.iter().map(|&f| d(f)).collect();
            let mut tally: HashMap<i64, u64> = HashMap::new();
            for s in enumerate_microstates(&dice).unwrap() {
                *tally.entry(sum_mapping(&s.0).unwrap()).or_default() += 1;
            }
            let table = macrostate_table(&dice, sum_mapping).unwrap();
            prop_assert_eq!(table.rows.len(), tally.len());
            for row in &table.rows {
                prop_assert_eq!(row.multiplicity.to_u64(), tally.get(&row.macrostate).copied());
            }
        }

        #[test]
        fn identical_pair_is_symmetric(f in 1u32..=20) {
            let table = macrostate_table(&[d(f), d(f)], sum_mapping).unwrap();
            let (lo, hi) = (2i64, 2 * f as i64);
            for row in &table.rows {
                let mirror = table.row(&(lo + hi - row.macrostate)).unwrap();
                prop_assert_eq!(&row.multiplicity, &mirror.multiplicity);
            }
        }
    }
}
