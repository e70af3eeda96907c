use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Graph, GraphError, VertexId};

/// Wire form: `{"vertices": [...], "edges": [["a","b"], ...], "labels": {...}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<[VertexId; 2]>,
    #[serde(default)]
    pub labels: BTreeMap<VertexId, String>,
}

impl From<&Graph> for GraphJson {
    fn from(g: &Graph) -> Self {
        GraphJson {
            vertices: g.ids().to_vec(),
            edges: g.edges().iter().map(|&(a, b)| [g.id(a).clone(), g.id(b).clone()]).collect(),
            labels: g.labels().map(|(k, v)| (k.clone(), v.to_owned())).collect(),
        }
    }
}

impl TryFrom<GraphJson> for Graph {
    type Error = GraphError;

    fn try_from(j: GraphJson) -> Result<Self, GraphError> {
        Graph::new(j.vertices, j.edges.into_iter().map(|[a, b]| (a, b)))?.with_labels(j.labels)
    }
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GraphJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = GraphJson::deserialize(d)?;
        Graph::try_from(j).map_err(serde::de::Error::custom)
    }
}
