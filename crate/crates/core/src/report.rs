//! Serialization helpers shared by the JSON and CSV outputs.

use serde::Serializer;

use crate::graph::Graph;
use crate::graph6::emit_graph6;
use crate::rational::{fmt_ratio, Rational};

pub fn ser_ratio<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_ratio(r))
}

pub fn ser_opt_ratio<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&fmt_ratio(r)),
        None => s.serialize_none(),
    }
}

pub fn ser_graph6<S: Serializer>(g: &Graph, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&emit_graph6(g))
}
