// SPDX-License-Identifier: Apache-2.0

//! Predicate IRIs understood by the store and the social-graph loader.
//! These strings are matched byte-for-byte.

pub const FOAF_KNOWS: &str = "http://xmlns.com/foaf/0.1/knows";
pub const FOAF_INTEREST: &str = "http://xmlns.com/foaf/0.1/interest";
pub const FOAF_BASED_NEAR: &str = "http://xmlns.com/foaf/0.1/based_near";
pub const RDFS_LABEL: &str = "http://www.w3.org/2000/01/rdf-schema#label";
pub const SKOS_BROADER: &str = "http://www.w3.org/2004/02/skos/core#broader";
pub const DCTERMS_SUBJECT: &str = "http://purl.org/dc/terms/subject";

/// Namespace whose members are treated as categories even without a
/// `skos:broader` edge pointing at them.
pub const DEFAULT_CATEGORY_PREFIX: &str = "http://dbpedia.org/resource/Category:";
