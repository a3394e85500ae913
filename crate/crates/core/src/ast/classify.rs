use super::visit::{stmts_mention, walk_stmts};
use super::*;

/// What kind of compilation unit a snippet is, from the APIzation point of view.
#[derive(Debug, Clone, PartialEq)]
pub enum UnitClass {
    /// Exactly one concrete method that already is a well-formed API.
    WellFormedApi(MethodDecl),
    /// Loose statements (or a method that still needs work).
    Dangling,
    /// More than one class or more than one public method.
    Ambiguous,
    /// Abstract methods only, or only field/class declarations.
    Impossible,
}

/// A method body is well formed when it references every parameter and has a
/// value-returning `return` iff the return type is not `void`.
pub fn is_well_formed(m: &MethodDecl) -> bool {
    let Some(body) = &m.body else {
        return false;
    };
    let params_used = m.params.iter().all(|p| stmts_mention(body, &p.name));
    params_used && (m.return_type.is_void() != has_value_return(body))
}

pub fn has_value_return(stmts: &[Stmt]) -> bool {
    let mut found = false;
    walk_stmts(stmts, &mut |s| {
        found |= matches!(s, Stmt::Return(Some(_)));
    });
    found
}

pub fn classify_unit(ast: &SnippetAst) -> UnitClass {
    let classes: Vec<&ClassDecl> = ast
        .statements
        .iter()
        .filter_map(|s| match s {
            Stmt::Class(c) => Some(c),
            _ => None,
        })
        .collect();
    let methods = ast.methods();
    let loose = ast
        .statements
        .iter()
        .filter(|s| !matches!(s, Stmt::Class(_) | Stmt::Method(_)))
        .count();

    if classes.len() > 1 || methods.iter().filter(|m| m.is_public()).count() > 1 {
        return UnitClass::Ambiguous;
    }
    if loose > 0 {
        return UnitClass::Dangling;
    }
    if methods.is_empty() || methods.iter().all(|m| m.is_abstract()) {
        return UnitClass::Impossible;
    }
    let extra_members = classes
        .iter()
        .any(|c| c.members.iter().any(|m| !matches!(m, Member::Method(_))));
    if methods.len() == 1 && !extra_members && is_well_formed(methods[0]) {
        return UnitClass::WellFormedApi(methods[0].clone());
    }
    UnitClass::Dangling
}

#[cfg(test)]
mod tests {
    use super::super::parse_snippet;
    use super::*;

    fn classify(src: &str) -> UnitClass {
        classify_unit(&parse_snippet(src).unwrap())
    }

    #[test]
    fn canonical_method_is_well_formed() {
        assert!(matches!(
            classify("public static int id(int x){return x;}"),
            UnitClass::WellFormedApi(_)
        ));
    }

    #[test]
    fn unreferenced_parameter_is_dangling() {
        assert_eq!(
            classify("public static void f(int x){int y=1;}"),
            UnitClass::Dangling
        );
    }

    #[test]
    fn missing_return_is_dangling() {
        assert_eq!(classify("int f(int x) { x++; }"), UnitClass::Dangling);
    }

    #[test]
    fn loose_statements_are_dangling() {
        assert_eq!(
            classify("Calendar c = Calendar.getInstance();\nDate d = c.getTime();"),
            UnitClass::Dangling
        );
    }

    #[test]
    fn multiple_classes_or_public_methods_are_ambiguous() {
        assert_eq!(classify("class A {}\nclass B {}"), UnitClass::Ambiguous);
        assert_eq!(
            classify("public void a() {}\npublic void b() {}"),
            UnitClass::Ambiguous
        );
    }

    #[test]
    fn abstract_or_field_only_is_impossible() {
        assert_eq!(
            classify("abstract class A { abstract void f(); }"),
            UnitClass::Impossible
        );
        assert_eq!(classify("class A { int x = 1; }"), UnitClass::Impossible);
        assert_eq!(
            classify("interface I { int size(); }"),
            UnitClass::Impossible
        );
    }

    #[test]
    fn wrapped_single_method_is_well_formed() {
        let src = "import java.util.Date;\npublic class Snippet1 {\n    public static Date now() throws Exception {\n        return new Date();\n    }\n}";
        assert!(matches!(classify(src), UnitClass::WellFormedApi(_)));
    }
}
