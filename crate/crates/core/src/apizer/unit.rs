use std::collections::BTreeSet;

use super::ApiDraft;
use crate::ast::visit::stmts_mention;
use crate::ast::{has_value_return, render_method};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConsistencyError {
    #[error("parameter `{0}` is never used")]
    UnusedParameter(String),
    #[error("parameter `{0}` is declared twice")]
    DuplicateParameter(String),
    #[error("void method returns a value")]
    VoidReturnsValue,
    #[error("method returning `{0}` has no return statement")]
    MissingReturn(String),
}

/// Rejects drafts whose header disagrees with their body.
pub fn check_consistency(draft: &ApiDraft) -> Result<(), ConsistencyError> {
    let mut seen = BTreeSet::new();
    for p in &draft.params {
        if !seen.insert(p.name.as_str()) {
            return Err(ConsistencyError::DuplicateParameter(p.name.clone()));
        }
        if !stmts_mention(&draft.body, &p.name) {
            return Err(ConsistencyError::UnusedParameter(p.name.clone()));
        }
    }
    let returns = has_value_return(&draft.body);
    match (draft.return_type.is_void(), returns) {
        (true, true) => Err(ConsistencyError::VoidReturnsValue),
        (false, false) => Err(ConsistencyError::MissingReturn(crate::ast::render_type(
            &draft.return_type,
        ))),
        _ => Ok(()),
    }
}

/// Renders the draft as a compilation unit: imports, a public class and the
/// method preceded by its javadoc.
pub fn render_unit(
    draft: &ApiDraft,
    class_name: &str,
    javadoc: &str,
) -> Result<String, ConsistencyError> {
    check_consistency(draft)?;
    let mut out = String::new();
    for import in &draft.resolution.imports {
        out.push_str(&format!("import {import};\n"));
    }
    if !draft.resolution.imports.is_empty() {
        out.push('\n');
    }
    out.push_str(&format!("public class {class_name} {{\n"));
    if !javadoc.is_empty() {
        out.push_str("    /**\n");
        for line in javadoc.lines() {
            if line.is_empty() {
                out.push_str("     *\n");
            } else {
                out.push_str(&format!("     * {line}\n"));
            }
        }
        out.push_str("     */\n");
    }
    out.push_str(&render_method(&draft.to_method(), 1));
    out.push_str("\n}\n");
    Ok(out)
}
