//! Check-target equations over the logical-level functions.

use super::generate::{GeneratedNames, Lifting, BIG};
use crate::surface::print::expr_to_sexp;
use crate::surface::sexp::Sexp;
use crate::surface::{Expr, FunctionDef, Printable};

/// `lhs = rhs`, universally quantified over the source parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equation {
    pub name: String,
    pub params: Vec<String>,
    pub lhs: Expr,
    pub rhs: Expr,
}

impl Printable for Equation {
    /// `(defthm NAME (equal LHS RHS))`.
    fn to_sexp(&self) -> Sexp {
        let equal = Sexp::list(vec![Sexp::symbol("equal"), expr_to_sexp(&self.lhs), expr_to_sexp(&self.rhs)]);
        Sexp::list(vec![Sexp::symbol("defthm"), Sexp::symbol(self.name.as_str()), equal])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedEquations {
    /// `(L-dom args)` equals the index-free domain recursion.
    pub l_dom: Equation,
    /// `(L-fn args)` equals the default off-domain and the source body otherwise.
    pub l_fn: Equation,
    /// Recursion equation of the least-index measure.
    pub measure: Equation,
    /// Characterization of the exported function; only with indexed execution.
    pub exported: Option<Equation>,
}

impl DerivedEquations {
    pub fn all(&self) -> Vec<&Equation> {
        let mut v = vec![&self.l_dom, &self.l_fn, &self.measure];
        v.extend(self.exported.as_ref());
        v
    }
}

pub fn derive_equations(def: &FunctionDef, names: &GeneratedNames, default: &Expr) -> DerivedEquations {
    let params: Vec<Expr> = def.params.iter().map(|p| Expr::var(p.as_str())).collect();
    let call = |name: &str| Expr::call(name, params.clone());
    let off_domain = Expr::negate(call(&names.logical_dom));

    let value = |args| Expr::call(names.logical_fn.as_str(), args);
    let domain = |args| Expr::call(names.logical_dom.as_str(), args);
    let measure = |args| Expr::call(names.measure.as_str(), args);
    let lifting = Lifting { fname: &def.name, value: &value, domain: &domain, measure: &measure };

    let l_dom = Equation {
        name: format!("{}-definition", names.logical_dom),
        params: def.params.clone(),
        lhs: call(&names.logical_dom),
        rhs: lifting.domain_body(&def.body),
    };
    let l_fn = Equation {
        name: format!("{}-definition", names.logical_fn),
        params: def.params.clone(),
        lhs: call(&names.logical_fn),
        rhs: Expr::if_(off_domain.clone(), default.clone(), lifting.values(&def.body)),
    };
    let measure_eq = Equation {
        name: format!("{}-definition", names.measure),
        params: def.params.clone(),
        lhs: call(&names.measure),
        rhs: Expr::if_(off_domain.clone(), Expr::int(0), lifting.measure_body(&def.body)),
    };
    let exported = (def.indexed_execution && !def.non_executable).then(|| {
        let mut comp_args = vec![Expr::call(BIG, vec![])];
        comp_args.extend(params.iter().cloned());
        Equation {
            name: format!("{}-definition", names.exported),
            params: def.params.clone(),
            lhs: call(&names.exported),
            rhs: Expr::if_(
                off_domain,
                Expr::call(names.comp.as_str(), comp_args),
                def.body.rewrite_calls(&def.name, &mut |args| Expr::call(names.exported.as_str(), args)),
            ),
        }
    });
    DerivedEquations { l_dom, l_fn, measure: measure_eq, exported }
}
