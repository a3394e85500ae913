//! Missing-type repair. Unresolved simple names in one snippet usually come
//! from the same package, so candidates are grouped by package and the
//! packages covering the most names are tried first.

use std::collections::{BTreeMap, BTreeSet};

use super::{analyze, Deadline, Diagnostic, DiagnosticKind, ResolutionState, ResolveError};
use crate::apizer::ApiDraft;
use crate::catalog::TypeCatalog;

/// Packages that win ties, most common first. Anything else ranks after
/// them, and third-party packages after the JDK.
const PACKAGE_ORDER: [&str; 11] = [
    "java.lang",
    "java.util",
    "java.io",
    "java.text",
    "java.math",
    "java.security",
    "java.util.regex",
    "java.net",
    "java.nio.file",
    "java.nio.charset",
    "java.sql",
];

pub fn package_priority(package: &str) -> usize {
    PACKAGE_ORDER
        .iter()
        .position(|p| *p == package)
        .unwrap_or_else(|| {
            if package.starts_with("java.") {
                PACKAGE_ORDER.len()
            } else {
                PACKAGE_ORDER.len() + 1
            }
        })
}

fn missing_types(
    draft: &ApiDraft,
    state: &ResolutionState,
    catalog: &TypeCatalog,
) -> Vec<Diagnostic> {
    analyze(draft, state, catalog)
        .into_iter()
        .filter(|d| d.kind == DiagnosticKind::MissingType)
        .collect()
}

/// Adds imports until no missing-type diagnostic remains. Each import is kept
/// only if it strictly reduces the number of missing types.
pub fn resolve_imports(
    draft: &ApiDraft,
    diags: &[Diagnostic],
    state: &ResolutionState,
    catalog: &TypeCatalog,
    deadline: Deadline,
) -> Result<ResolutionState, ResolveError> {
    let mut state = state.clone();
    let mut missing: Vec<Diagnostic> = diags
        .iter()
        .filter(|d| d.kind == DiagnosticKind::MissingType)
        .cloned()
        .collect();
    if missing.is_empty() {
        return Ok(state);
    }
    loop {
        deadline.check()?;
        let ids: BTreeSet<String> = missing.iter().map(|d| d.identifier.clone()).collect();

        let mut clusters: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for id in &ids {
            let candidates = catalog.lookup_simple_name(id);
            let candidates: Vec<_> = candidates
                .into_iter()
                .filter(|q| state.single_import_for(id).is_none() || state.imports.contains(q))
                .collect();
            if candidates.is_empty() {
                return Err(ResolveError::Unresolvable(id.clone()));
            }
            for q in candidates {
                let pkg = catalog
                    .get(&q)
                    .map(|e| e.package.clone())
                    .unwrap_or_default();
                clusters.entry(pkg).or_default().push(q);
            }
        }
        let imported_pkgs: BTreeSet<String> = state
            .imports
            .iter()
            .filter_map(|i| i.rsplit_once('.').map(|(p, _)| p.to_string()))
            .collect();
        let mut order: Vec<(String, Vec<String>)> = clusters.into_iter().collect();
        order.sort_by(|(pa, qa), (pb, qb)| {
            qb.len()
                .cmp(&qa.len())
                .then_with(|| imported_pkgs.contains(pb).cmp(&imported_pkgs.contains(pa)))
                .then_with(|| package_priority(pa).cmp(&package_priority(pb)))
                .then_with(|| pa.cmp(pb))
        });

        let before = missing.len();
        let mut progressed = false;
        for (_, qualified) in order {
            for q in qualified {
                deadline.check()?;
                let mut trial = state.clone();
                trial.add_import(&q, catalog);
                let after = missing_types(draft, &trial, catalog);
                if after.len() < missing.len() {
                    state = trial;
                    missing = after;
                    progressed = true;
                }
            }
            if progressed {
                break;
            }
        }
        if missing.is_empty() {
            return Ok(state);
        }
        if !progressed || missing.len() >= before {
            let first = missing[0].identifier.clone();
            return Err(ResolveError::Unresolvable(first));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::parse_snippet;

    fn resolve(src: &str) -> Result<BTreeSet<String>, ResolveError> {
        let cat = TypeCatalog::bundled();
        let draft = ApiDraft::initial(parse_snippet(src).unwrap().statements);
        let state = ResolutionState::default();
        let diags = analyze(&draft, &state, cat);
        resolve_imports(&draft, &diags, &state, cat, Deadline::none()).map(|s| s.imports)
    }

    fn set(items: &[&str]) -> BTreeSet<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn security_cluster() {
        let src = "try { MessageDigest md = MessageDigest.getInstance(\"MD5\"); } catch (NoSuchAlgorithmException e) { }";
        assert_eq!(
            resolve(src).unwrap(),
            set(&[
                "java.security.MessageDigest",
                "java.security.NoSuchAlgorithmException"
            ])
        );
    }

    #[test]
    fn util_cluster_beats_sql_decoy() {
        let src = "Calendar c = Calendar.getInstance();\nDate d = c.getTime();";
        assert_eq!(
            resolve(src).unwrap(),
            set(&["java.util.Calendar", "java.util.Date"])
        );
        let src = "Timestamp t = null;\nDate d = t;";
        assert_eq!(
            resolve(src).unwrap(),
            set(&["java.sql.Date", "java.sql.Timestamp"])
        );
    }

    #[test]
    fn unknown_name_is_unresolvable() {
        assert_eq!(
            resolve("Zorble z = null;"),
            Err(ResolveError::Unresolvable("Zorble".into()))
        );
    }

    #[test]
    fn libraries_follow_imports() {
        let cat = TypeCatalog::bundled();
        let draft = ApiDraft::initial(
            parse_snippet("boolean b = StringUtils.isBlank(\"x\");")
                .unwrap()
                .statements,
        );
        let state = ResolutionState::default();
        let diags = analyze(&draft, &state, cat);
        let out = resolve_imports(&draft, &diags, &state, cat, Deadline::none()).unwrap();
        assert!(out.libraries.contains("commons-lang3"));
        for i in &out.imports {
            assert!(out.libraries.contains(cat.library_of(i).unwrap()));
        }
    }
}
