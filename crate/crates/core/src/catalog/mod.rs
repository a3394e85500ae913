//! Signature catalog: the set of library types a snippet may refer to.
//!
//! Catalog files are JSON lines, one type per line:
//!
//! ```text
//! {"name":"java.lang.String","package":"java.lang","library":"jdk","supertypes":["java.lang.Object"],
//!  "primitive":false,"methods":[{"name":"getBytes","params":[],"returns":"byte[]","static":false}],
//!  "fields":[]}
//! ```
//!
//! Generic type arguments are erased: `List<String>.get` returns `java.lang.Object`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

pub const OBJECT: &str = "java.lang.Object";
pub const STRING: &str = "java.lang.String";
pub const COLLECTION: &str = "java.util.Collection";
pub const MAP: &str = "java.util.Map";
pub const ITERABLE: &str = "java.lang.Iterable";

/// Library id of the bundled JDK subset; part of every default classpath.
pub const JDK_LIBRARY: &str = "jdk";

const BUNDLED: &str = include_str!("../../data/jdk.jsonl");

#[derive(Debug, thiserror::Error)]
pub enum CatalogError {
    #[error("cannot read catalog: {0}")]
    Io(#[from] std::io::Error),
    #[error("catalog schema error at line {line}: {message}")]
    Schema { line: usize, message: String },
    #[error("unknown type `{0}`")]
    UnknownType(String),
}

fn schema(line: usize, message: impl Into<String>) -> CatalogError {
    CatalogError::Schema {
        line,
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MethodSig {
    pub name: String,
    pub params: Vec<String>,
    pub returns: String,
    #[serde(rename = "static", default)]
    pub is_static: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSig {
    pub name: String,
    #[serde(rename = "type")]
    pub ty: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TypeEntry {
    pub name: String,
    pub package: String,
    pub library: String,
    #[serde(default)]
    pub supertypes: Vec<String>,
    #[serde(default)]
    pub primitive: bool,
    #[serde(default)]
    pub methods: Vec<MethodSig>,
    #[serde(default)]
    pub fields: Vec<FieldSig>,
}

impl TypeEntry {
    /// Name without the package, e.g. `Map.Entry` for `java.util.Map.Entry`.
    pub fn local_name(&self) -> &str {
        if self.package.is_empty() {
            &self.name
        } else {
            self.name
                .strip_prefix(&self.package)
                .and_then(|s| s.strip_prefix('.'))
                .unwrap_or(&self.name)
        }
    }

    /// Last dotted segment.
    pub fn simple_name(&self) -> &str {
        self.name.rsplit('.').next().unwrap_or(&self.name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeCatalog {
    entries: BTreeMap<String, TypeEntry>,
    by_simple: BTreeMap<String, BTreeSet<String>>,
    by_package: BTreeMap<String, BTreeSet<String>>,
}

impl TypeCatalog {
    /// The JDK subset shipped with the crate.
    pub fn bundled() -> &'static TypeCatalog {
        static CATALOG: OnceLock<TypeCatalog> = OnceLock::new();
        CATALOG.get_or_init(|| TypeCatalog::from_jsonl(BUNDLED).expect("bundled catalog is valid"))
    }

    pub fn bundled_source() -> &'static str {
        BUNDLED
    }

    pub fn load(path: impl AsRef<Path>) -> Result<TypeCatalog, CatalogError> {
        let text = std::fs::read_to_string(path)?;
        TypeCatalog::from_jsonl(&text)
    }

    pub fn from_jsonl(text: &str) -> Result<TypeCatalog, CatalogError> {
        let mut entries: BTreeMap<String, TypeEntry> = BTreeMap::new();
        let mut lines_of: BTreeMap<String, usize> = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            if raw.trim().is_empty() {
                continue;
            }
            let entry: TypeEntry =
                serde_json::from_str(raw).map_err(|e| schema(line, e.to_string()))?;
            if entry.name.is_empty() {
                return Err(schema(line, "empty type name"));
            }
            if !entry.package.is_empty() && !entry.name.starts_with(&format!("{}.", entry.package))
            {
                return Err(schema(
                    line,
                    format!("`{}` is not inside package `{}`", entry.name, entry.package),
                ));
            }
            let mut sigs = BTreeSet::new();
            for m in &entry.methods {
                if !sigs.insert((m.name.clone(), m.params.clone())) {
                    return Err(schema(
                        line,
                        format!("duplicate method {}({})", m.name, m.params.join(", ")),
                    ));
                }
            }
            if entries.contains_key(&entry.name) {
                return Err(schema(line, format!("duplicate type `{}`", entry.name)));
            }
            lines_of.insert(entry.name.clone(), line);
            entries.insert(entry.name.clone(), entry);
        }
        if entries.is_empty() {
            return Err(schema(1, "catalog has no entries"));
        }
        for entry in entries.values() {
            for sup in &entry.supertypes {
                if !entries.contains_key(sup) {
                    return Err(schema(
                        lines_of[&entry.name],
                        format!("`{}` names unknown supertype `{sup}`", entry.name),
                    ));
                }
            }
        }
        check_acyclic(&entries, &lines_of)?;

        let mut by_simple: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        let mut by_package: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        for entry in entries.values() {
            by_simple
                .entry(entry.simple_name().to_string())
                .or_default()
                .insert(entry.name.clone());
            if !entry.package.is_empty() {
                by_package
                    .entry(entry.package.clone())
                    .or_default()
                    .insert(entry.name.clone());
            }
        }
        Ok(TypeCatalog {
            entries,
            by_simple,
            by_package,
        })
    }

    pub fn get(&self, qualified: &str) -> Option<&TypeEntry> {
        self.entries.get(qualified)
    }

    pub fn contains(&self, qualified: &str) -> bool {
        self.entries.contains_key(qualified)
    }

    pub fn entries(&self) -> impl Iterator<Item = &TypeEntry> {
        self.entries.values()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Qualified names whose last segment is `simple`, sorted.
    pub fn lookup_simple_name(&self, simple: &str) -> Vec<String> {
        self.by_simple
            .get(simple)
            .map(|s| s.iter().cloned().collect())
            .unwrap_or_default()
    }

    pub fn types_in_package(&self, package: &str) -> Vec<&TypeEntry> {
        self.by_package
            .get(package)
            .map(|names| names.iter().filter_map(|n| self.entries.get(n)).collect())
            .unwrap_or_default()
    }

    pub fn has_package(&self, package: &str) -> bool {
        self.by_package.contains_key(package)
    }

    pub fn library_of(&self, qualified: &str) -> Option<&str> {
        self.entries.get(qualified).map(|e| e.library.as_str())
    }

    /// Types of `java.lang` need no import.
    pub fn is_auto_imported(&self, qualified: &str) -> bool {
        self.entries
            .get(qualified)
            .is_some_and(|e| e.package == "java.lang" && e.local_name() == e.simple_name())
    }

    pub fn is_primitive(&self, name: &str) -> bool {
        self.entries.get(name).is_some_and(|e| e.primitive)
    }

    /// `t` followed by all its supertypes in breadth-first order. Reference
    /// types always end with `java.lang.Object` when the catalog has it.
    pub fn ancestors(&self, t: &str) -> Result<Vec<String>, CatalogError> {
        let entry = self
            .entries
            .get(t)
            .ok_or_else(|| CatalogError::UnknownType(t.to_string()))?;
        let mut seen = BTreeSet::new();
        let mut order = Vec::new();
        let mut queue = VecDeque::from([t.to_string()]);
        while let Some(cur) = queue.pop_front() {
            if !seen.insert(cur.clone()) {
                continue;
            }
            if let Some(e) = self.entries.get(&cur) {
                queue.extend(e.supertypes.iter().cloned());
            }
            order.push(cur);
        }
        if !entry.primitive && !seen.contains(OBJECT) && self.entries.contains_key(OBJECT) {
            order.push(OBJECT.to_string());
        }
        Ok(order)
    }

    /// Reflexive, transitive subtype test over the supertype edges.
    pub fn is_subtype_of(&self, t: &str, sup: &str) -> Result<bool, CatalogError> {
        Ok(self.ancestors(t)?.iter().any(|a| a == sup))
    }

    /// Methods named `name` with `arity` parameters declared by `receiver` or
    /// any supertype, nearest first.
    pub fn methods(
        &self,
        receiver: &str,
        name: &str,
        arity: usize,
    ) -> Result<Vec<&MethodSig>, CatalogError> {
        let mut out: Vec<&MethodSig> = Vec::new();
        for t in self.ancestors(receiver)? {
            if let Some(e) = self.entries.get(&t) {
                for m in &e.methods {
                    if m.name == name
                        && m.params.len() == arity
                        && !out.iter().any(|o| o.params == m.params)
                    {
                        out.push(m);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Whether any member method is named `name`, regardless of arity.
    pub fn has_method_named(&self, receiver: &str, name: &str) -> bool {
        self.ancestors(receiver).is_ok_and(|anc| {
            anc.iter().any(|t| {
                self.entries
                    .get(t)
                    .is_some_and(|e| e.methods.iter().any(|m| m.name == name))
            })
        })
    }

    /// Return types of every member `method/arity` visible on `receiver`.
    pub fn member_return_type(
        &self,
        receiver: &str,
        method: &str,
        arity: usize,
    ) -> Result<BTreeSet<String>, CatalogError> {
        Ok(self
            .methods(receiver, method, arity)?
            .into_iter()
            .map(|m| m.returns.clone())
            .collect())
    }

    pub fn field(&self, receiver: &str, name: &str) -> Result<Option<&FieldSig>, CatalogError> {
        for t in self.ancestors(receiver)? {
            if let Some(f) = self
                .entries
                .get(&t)
                .and_then(|e| e.fields.iter().find(|f| f.name == name))
            {
                return Ok(Some(f));
            }
        }
        Ok(None)
    }
}

fn check_acyclic(
    entries: &BTreeMap<String, TypeEntry>,
    lines_of: &BTreeMap<String, usize>,
) -> Result<(), CatalogError> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Visiting,
        Done,
    }
    fn visit(
        name: &str,
        entries: &BTreeMap<String, TypeEntry>,
        marks: &mut BTreeMap<String, Mark>,
    ) -> Option<String> {
        match marks.get(name) {
            Some(Mark::Done) => return None,
            Some(Mark::Visiting) => return Some(name.to_string()),
            None => {}
        }
        marks.insert(name.to_string(), Mark::Visiting);
        for sup in &entries[name].supertypes {
            if let Some(c) = visit(sup, entries, marks) {
                return Some(c);
            }
        }
        marks.insert(name.to_string(), Mark::Done);
        None
    }
    let mut marks = BTreeMap::new();
    for name in entries.keys() {
        if let Some(c) = visit(name, entries, &mut marks) {
            return Err(schema(
                lines_of[&c],
                format!("supertype cycle through `{c}`"),
            ));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cat() -> &'static TypeCatalog {
        TypeCatalog::bundled()
    }

    #[test]
    fn bundled_catalog_has_string_get_bytes() {
        let s = cat().get(STRING).unwrap();
        assert!(s
            .methods
            .iter()
            .any(|m| m.name == "getBytes" && m.params.is_empty() && m.returns == "byte[]"));
        assert!(cat().is_auto_imported(STRING));
        assert!(!cat().is_auto_imported("java.util.Date"));
    }

    #[test]
    fn simple_name_lookup() {
        assert_eq!(
            cat().lookup_simple_name("MessageDigest"),
            vec!["java.security.MessageDigest".to_string()]
        );
        assert_eq!(cat().lookup_simple_name("String"), vec![STRING.to_string()]);
        assert!(cat().lookup_simple_name("Zorble").is_empty());
        assert_eq!(
            cat().lookup_simple_name("Date"),
            vec!["java.sql.Date".to_string(), "java.util.Date".to_string()]
        );
    }

    #[test]
    fn subtype_queries() {
        assert!(cat()
            .is_subtype_of("java.util.ArrayList", COLLECTION)
            .unwrap());
        assert!(!cat().is_subtype_of(STRING, COLLECTION).unwrap());
        assert!(cat().is_subtype_of(STRING, STRING).unwrap());
        assert!(cat().is_subtype_of("java.util.HashMap", OBJECT).unwrap());
        assert!(matches!(
            cat().is_subtype_of("x.Nope", OBJECT),
            Err(CatalogError::UnknownType(_))
        ));
    }

    #[test]
    fn member_return_types() {
        let r = cat().member_return_type(STRING, "getBytes", 0).unwrap();
        assert_eq!(r, BTreeSet::from(["byte[]".to_string()]));
        let r = cat()
            .member_return_type("java.util.Calendar", "getTime", 0)
            .unwrap();
        assert_eq!(r, BTreeSet::from(["java.util.Date".to_string()]));
        assert!(cat()
            .member_return_type(STRING, "noSuchMethod", 0)
            .unwrap()
            .is_empty());
        // inherited from Object
        let r = cat()
            .member_return_type("java.util.ArrayList", "hashCode", 0)
            .unwrap();
        assert_eq!(r, BTreeSet::from(["int".to_string()]));
        assert!(cat().member_return_type("x.Nope", "a", 0).is_err());
    }

    #[test]
    fn schema_errors() {
        assert!(matches!(
            TypeCatalog::from_jsonl(""),
            Err(CatalogError::Schema { .. })
        ));
        let rec = r#"{"name":"a.B","package":"a","library":"l","supertypes":[],"primitive":false,"methods":[],"fields":[]}"#;
        let dup = format!("{rec}\n{rec}\n");
        match TypeCatalog::from_jsonl(&dup) {
            Err(CatalogError::Schema { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected schema error, got {other:?}"),
        }
        assert!(TypeCatalog::from_jsonl("{not json}").is_err());
        let cyc = concat!(
            r#"{"name":"a.B","package":"a","library":"l","supertypes":["a.C"]}"#,
            "\n",
            r#"{"name":"a.C","package":"a","library":"l","supertypes":["a.B"]}"#
        );
        assert!(TypeCatalog::from_jsonl(cyc).is_err());
        let unknown_sup = r#"{"name":"a.B","package":"a","library":"l","supertypes":["a.Z"]}"#;
        assert!(TypeCatalog::from_jsonl(unknown_sup).is_err());
    }

    #[test]
    fn loading_is_deterministic() {
        let a = TypeCatalog::from_jsonl(BUNDLED).unwrap();
        let b = TypeCatalog::from_jsonl(BUNDLED).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn every_entry_is_indexed() {
        for e in cat().entries() {
            assert!(cat().lookup_simple_name(e.simple_name()).contains(&e.name));
        }
    }
}
