//! Group specification strings: `an:<n>`, `sn:<n>`, `psl2:<q>`, `ab2:<n>` and
//! `perm:<source>`, where the source names a JSON list of generators.

use super::{Ab2, GroupError, PermGroup, Symmetric};
use crate::psl2::Psl2;

/// One of the concrete backends, chosen at run time.
#[derive(Clone, Debug)]
pub enum AnyGroup {
    Symmetric(Symmetric),
    Psl2(Psl2),
    Ab2(Ab2),
    Perm(PermGroup),
}

/// Runs `$body` with `$g` bound to the concrete group inside an [`AnyGroup`].
#[macro_export]
macro_rules! with_group {
    ($any:expr, $g:ident => $body:expr) => {
        match $any {
            $crate::group::AnyGroup::Symmetric($g) => $body,
            $crate::group::AnyGroup::Psl2($g) => $body,
            $crate::group::AnyGroup::Ab2($g) => $body,
            $crate::group::AnyGroup::Perm($g) => $body,
        }
    };
}

/// Parses a specification. `load` turns the part after `perm:` into the JSON text of
/// the generators; it is only called for permutation groups.
pub fn parse_group_spec(spec: &str, load: impl FnOnce(&str) -> Result<String, String>) -> Result<AnyGroup, GroupError> {
    let bad = |why: &str| GroupError::BadSpec(spec.into(), why.into());
    let (family, arg) = spec.split_once(':').ok_or_else(|| bad("expected <family>:<argument>"))?;
    let number = || arg.trim().parse::<u64>().map_err(|_| bad("the argument must be a non-negative integer"));
    match family.trim() {
        "an" => Ok(AnyGroup::Symmetric(Symmetric::alternating(number()? as usize)?)),
        "sn" => Ok(AnyGroup::Symmetric(Symmetric::symmetric(number()? as usize)?)),
        "psl2" => Ok(AnyGroup::Psl2(Psl2::new(number()?).map_err(|e| bad(&e.to_string()))?)),
        "ab2" => {
            let n = u32::try_from(number()?).map_err(|_| bad("n is too large"))?;
            Ok(AnyGroup::Ab2(Ab2::new(n)?))
        }
        "perm" => {
            let text = load(arg).map_err(|e| bad(&e))?;
            Ok(AnyGroup::Perm(PermGroup::from_json_text(arg, &text)?))
        }
        other => Err(bad(&format!("unknown family {other:?}; expected an, sn, psl2, ab2 or perm"))),
    }
}

/// [`parse_group_spec`] for specifications that never name a file.
pub fn parse_builtin_spec(spec: &str) -> Result<AnyGroup, GroupError> {
    parse_group_spec(spec, |_| Err("permutation groups need a generator source".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Group;

    #[test]
    fn specs_round_trip() {
        for s in ["an:6", "sn:5", "psl2:7", "psl2:8", "ab2:5"] {
            let g = parse_builtin_spec(s).unwrap();
            assert_eq!(crate::with_group!(&g, h => h.spec()), s);
        }
        let order = |s: &str| crate::with_group!(parse_builtin_spec(s).unwrap(), h => h.order());
        assert_eq!(order("an:5"), 60u32.into());
        assert_eq!(order("psl2:7"), 168u32.into());
        assert_eq!(order("ab2:6"), 36u32.into());
    }

    #[test]
    fn permutation_groups_are_loaded() {
        let g = parse_group_spec("perm:a5.json", |name| {
            assert_eq!(name, "a5.json");
            Ok(r#"["(0 1 2)", "(0 1 2 3 4)"]"#.into())
        })
        .unwrap();
        assert_eq!(crate::with_group!(&g, h => h.order()), 60u32.into());
        assert_eq!(crate::with_group!(&g, h => h.spec()), "perm:a5.json");
    }

    #[test]
    fn bad_specs() {
        for s in ["an", "xx:5", "an:x", "psl2:6", "ab2:0", "perm:missing"] {
            assert!(matches!(parse_builtin_spec(s), Err(GroupError::BadSpec(..))), "{s}");
        }
    }
}
