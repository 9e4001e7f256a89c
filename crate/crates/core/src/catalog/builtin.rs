//! Name lookup for the built-in groups and quantum groups.

use super::GroupTable;
use crate::fqg::{codouble, function_algebra, group_algebra, kac_paljutkin, FqgData, FqgError};

/// A catalog entry: either a classical group or a finite quantum group.
#[derive(Debug, Clone)]
#[allow(clippy::large_enum_variant)]
pub enum Builtin {
    Group(GroupTable),
    Quantum(FqgData),
}

impl Builtin {
    /// The quantum group, reading a classical group `G` as `C(G)`.
    pub fn into_quantum(self) -> Result<FqgData, FqgError> {
        match self {
            Builtin::Quantum(a) => Ok(a),
            Builtin::Group(g) => function_algebra(&g),
        }
    }

    pub fn as_group(&self) -> Option<&GroupTable> {
        match self {
            Builtin::Group(g) => Some(g),
            Builtin::Quantum(_) => None,
        }
    }
}

/// Classical group by name: `Z<n>`, `Zn(<n>)`, `S3`, `S4`, `D4`, `Q8`.
pub fn builtin_group(name: &str) -> Result<GroupTable, FqgError> {
    let name = name.trim();
    let unknown = || FqgError::NotAGroup(format!("unknown catalog name `{name}`"));
    let cyclic = |digits: &str| -> Result<GroupTable, FqgError> {
        let n: usize = digits.parse().map_err(|_| unknown())?;
        if n == 0 || n > 64 {
            return Err(unknown());
        }
        Ok(GroupTable::cyclic(n))
    };
    match name {
        "S3" => Ok(GroupTable::symmetric(3)),
        "S4" => Ok(GroupTable::symmetric(4)),
        "D4" => Ok(GroupTable::dihedral(4)),
        "Q8" => Ok(GroupTable::quaternion()),
        _ => {
            if let Some(inner) = name.strip_prefix("Zn(").and_then(|s| s.strip_suffix(')')) {
                cyclic(inner.trim())
            } else if let Some(digits) = name.strip_prefix('Z') {
                cyclic(digits)
            } else {
                Err(unknown())
            }
        }
    }
}

/// Look up a catalog object. Groups come back as tables; `C(X)`, `C[X]`,
/// `KP8`, `dual(X)` and `codouble(X)` come back as quantum groups, each
/// axiom-verified. Inside a wrapper a bare group name means `C(G)`.
pub fn builtin(name: &str) -> Result<Builtin, FqgError> {
    let name = name.trim();
    if name == "KP8" {
        return Ok(Builtin::Quantum(kac_paljutkin()?.with_name("KP8")));
    }
    if let Some(inner) = name.strip_prefix("C(").and_then(|s| s.strip_suffix(')')) {
        let g = builtin_group(inner)?;
        return Ok(Builtin::Quantum(function_algebra(&g)?.checked()?.with_name(name)));
    }
    if let Some(inner) = name.strip_prefix("C[").and_then(|s| s.strip_suffix(']')) {
        let g = builtin_group(inner)?;
        return Ok(Builtin::Quantum(group_algebra(&g)?.checked()?.with_name(name)));
    }
    if let Some(inner) = name.strip_prefix("dual(").and_then(|s| s.strip_suffix(')')) {
        let a = builtin(inner)?.into_quantum()?;
        return Ok(Builtin::Quantum(crate::fqg::dual(&a)?.checked()?.with_name(name)));
    }
    if let Some(inner) = name.strip_prefix("codouble(").and_then(|s| s.strip_suffix(')')) {
        let a = builtin(inner)?.into_quantum()?;
        return Ok(Builtin::Quantum(codouble(&a)?.data.with_name(name)));
    }
    builtin_group(name).map(Builtin::Group)
}

/// Look up a quantum group, reading a bare group name as `C(G)`.
pub fn builtin_quantum(name: &str) -> Result<FqgData, FqgError> {
    let b = builtin(name)?;
    let named = matches!(b, Builtin::Group(_));
    let a = b.into_quantum()?;
    Ok(if named { a.with_name(format!("C({})", name.trim())) } else { a })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_resolve() {
        assert_eq!(builtin("S3").unwrap().as_group().unwrap().order(), 6);
        assert_eq!(builtin("Zn(5)").unwrap().as_group().unwrap().order(), 5);
        assert_eq!(builtin("Z4").unwrap().as_group().unwrap().order(), 4);
        let kp = builtin("KP8").unwrap().into_quantum().unwrap();
        assert_eq!(kp.dim(), 8);
        assert!(kp.verify_hopf_axioms().passed());
        assert_eq!(builtin_quantum("C[Q8]").unwrap().dim(), 8);
        assert_eq!(builtin_quantum("dual(C(S3))").unwrap().name(), "dual(C(S3))");
        assert_eq!(builtin_quantum("codouble(C(Z2))").unwrap().dim(), 4);
        assert_eq!(builtin_quantum("D4").unwrap().name(), "C(D4)");
    }

    #[test]
    fn unknown_names_fail() {
        for bad in ["", "S5", "Zn(x)", "Z0", "C(KP8)", "foo"] {
            assert!(builtin(bad).is_err(), "{bad}");
        }
    }
}
