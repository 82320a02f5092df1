//! JSON form of tagged partitions and gages.

use serde::{Deserialize, Serialize};

use super::{Gage, Interval, PartitionKind, TaggedItem, TaggedPartition};
use crate::error::Result;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ItemDoc {
    pub a: String,
    pub b: String,
    pub tag: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionDoc {
    pub kind: PartitionKind,
    pub items: Vec<ItemDoc>,
}

impl PartitionDoc {
    pub fn from_items<S: Scalar>(kind: PartitionKind, items: &[TaggedItem<S>]) -> Self {
        Self {
            kind,
            items: items
                .iter()
                .map(|it| ItemDoc {
                    a: it.interval.a().to_canonical(),
                    b: it.interval.b().to_canonical(),
                    tag: it.tag.to_canonical(),
                })
                .collect(),
        }
    }

    pub fn from_partition<S: Scalar>(pi: &TaggedPartition<S>) -> Self {
        Self::from_items(pi.kind(), pi.items())
    }

    /// Rebuilds and validates a full partition of [0,1].
    pub fn build<S: Scalar>(&self) -> Result<TaggedPartition<S>> {
        let items = self
            .items
            .iter()
            .map(|it| Ok(TaggedItem::new(Interval::new(S::parse(&it.a)?, S::parse(&it.b)?)?, S::parse(&it.tag)?)))
            .collect::<Result<Vec<_>>>()?;
        TaggedPartition::new(items, self.kind)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GageDoc {
    pub breakpoints: Vec<String>,
    pub values: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub overrides: Vec<(String, String)>,
}

impl GageDoc {
    pub fn from_gage<S: Scalar>(g: &Gage<S>) -> Self {
        let s = |v: &[S]| v.iter().map(S::to_canonical).collect();
        Self {
            breakpoints: s(g.breakpoints()),
            values: s(g.values()),
            overrides: g.overrides().iter().map(|(p, v)| (p.to_canonical(), v.to_canonical())).collect(),
        }
    }

    pub fn build<S: Scalar>(&self) -> Result<Gage<S>> {
        let p = |v: &[String]| v.iter().map(|x| S::parse(x)).collect::<Result<Vec<S>>>();
        let overrides =
            self.overrides.iter().map(|(a, b)| Ok((S::parse(a)?, S::parse(b)?))).collect::<Result<Vec<_>>>()?;
        Gage::with_overrides(p(&self.breakpoints)?, p(&self.values)?, overrides)
    }
}
