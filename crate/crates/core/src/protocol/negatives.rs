use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{PairEntry, Relation, SmileType};
use crate::classifier::Label;
use crate::rng::SplitMix64;
use crate::{Error, Result};

/// Connected components of the kinship graph induced by positive pairs.
#[derive(Debug, Clone, Default)]
pub struct FamilyGraph {
    ids: BTreeMap<String, usize>,
    parent: Vec<usize>,
}

impl FamilyGraph {
    pub fn from_positives(pairs: &[PairEntry]) -> Self {
        let mut g = FamilyGraph::default();
        for p in pairs.iter().filter(|p| p.label == Label::Kin) {
            let a = g.intern(&p.subject_a);
            let b = g.intern(&p.subject_b);
            g.union(a, b);
        }
        g
    }

    fn intern(&mut self, subject: &str) -> usize {
        if let Some(&i) = self.ids.get(subject) {
            return i;
        }
        let i = self.parent.len();
        self.parent.push(i);
        self.ids.insert(subject.into(), i);
        i
    }

    fn find(&self, mut i: usize) -> usize {
        while self.parent[i] != i {
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }

    /// Whether two subjects are linked directly or through other relatives.
    /// A subject is related to itself.
    pub fn related(&self, a: &str, b: &str) -> bool {
        if a == b {
            return true;
        }
        match (self.ids.get(a), self.ids.get(b)) {
            (Some(&x), Some(&y)) => self.find(x) == self.find(y),
            _ => false,
        }
    }
}

/// Appends one negative per positive.
///
/// The negative keeps video A and draws video B uniformly, with rejection,
/// from the videos of the same (relation, smile type) subset whose subject is
/// unrelated to subject A. Its id is the positive's id with `_neg` appended.
pub fn generate_negatives(positives: &[PairEntry], seed: u64) -> Result<Vec<PairEntry>> {
    for p in positives {
        p.validate()?;
        if p.label != Label::Kin {
            return Err(Error::InvalidParams(format!(
                "pair {} is not a positive pair",
                p.pair_id
            )));
        }
    }
    let graph = FamilyGraph::from_positives(positives);

    // candidate (video, subject) lists per subset, in first-appearance order
    let mut subsets: BTreeMap<(Relation, SmileType), Vec<(String, String)>> = BTreeMap::new();
    for p in positives {
        let list = subsets.entry((p.relation, p.smile_type)).or_default();
        for (v, s) in [(&p.video_a, &p.subject_a), (&p.video_b, &p.subject_b)] {
            if !list.iter().any(|(lv, _)| lv == v) {
                list.push((v.clone(), s.clone()));
            }
        }
    }

    let mut rng = SplitMix64::new(seed);
    let mut out = positives.to_vec();
    for p in positives {
        let candidates = &subsets[&(p.relation, p.smile_type)];
        if !candidates.iter().any(|(_, s)| !graph.related(&p.subject_a, s)) {
            return Err(Error::SubsetTooSmall {
                relation: p.relation.code().into(),
                smile: p.smile_type.code().into(),
                video: p.video_a.clone(),
            });
        }
        let (video, subject) = loop {
            let c = &candidates[rng.index(candidates.len())];
            if !graph.related(&p.subject_a, &c.1) {
                break c;
            }
        };
        out.push(PairEntry {
            pair_id: format!("{}_neg", p.pair_id),
            video_a: p.video_a.clone(),
            video_b: video.clone(),
            subject_a: p.subject_a.clone(),
            subject_b: subject.clone(),
            relation: p.relation,
            smile_type: p.smile_type,
            label: Label::NonKin,
        });
    }
    Ok(out)
}
