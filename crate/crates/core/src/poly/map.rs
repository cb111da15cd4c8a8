use super::{Polynomial, VarList};
use crate::error::{Error, Result};

/// A polynomial map `G = (G_1, ..., G_p)` on a named coordinate space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMap {
    source_vars: VarList,
    components: Vec<Polynomial>,
}

impl PolyMap {
    pub fn new(source_vars: VarList, components: Vec<Polynomial>) -> Result<Self> {
        for c in &components {
            if *c.vars() != source_vars {
                return Err(Error::InvalidInput(format!(
                    "component `{c}` is not over {source_vars}"
                )));
            }
        }
        Ok(PolyMap {
            source_vars,
            components,
        })
    }

    pub fn parse(source_vars: &VarList, texts: &[&str]) -> Result<Self> {
        let comps = texts
            .iter()
            .map(|t| Polynomial::parse(t, source_vars))
            .collect::<Result<Vec<_>>>()?;
        Self::new(source_vars.clone(), comps)
    }

    pub fn source_vars(&self) -> &VarList {
        &self.source_vars
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Entry `(i, j)` is `∂G_i/∂wrt_j`.
    pub fn jacobian(&self, wrt: &[&str]) -> Result<Vec<Vec<Polynomial>>> {
        let idx = wrt
            .iter()
            .map(|n| self.source_vars.require(n))
            .collect::<Result<Vec<_>>>()?;
        Ok(self
            .components
            .iter()
            .map(|g| idx.iter().map(|&j| g.derivative(j)).collect())
            .collect())
    }

    /// Jacobian with respect to every source variable.
    pub fn full_jacobian(&self) -> Vec<Vec<Polynomial>> {
        self.components
            .iter()
            .map(|g| {
                (0..self.source_vars.len())
                    .map(|j| g.derivative(j))
                    .collect()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, ratio};

    #[test]
    fn power_rule() {
        let vars = VarList::of(&["x", "y"]);
        let g = PolyMap::parse(&vars, &["x^2 - y^3"]).unwrap();
        let j = g.jacobian(&["x", "y"]).unwrap();
        assert_eq!(j[0][0].to_string(), "2*x");
        assert_eq!(j[0][1].to_string(), "-3*y^2");
        let id = PolyMap::parse(&VarList::of(&["x"]), &["x"]).unwrap();
        assert_eq!(id.jacobian(&["x"]).unwrap()[0][0].to_string(), "1");
    }

    #[test]
    fn unknown_variable_in_wrt() {
        let vars = VarList::of(&["x"]);
        let g = PolyMap::parse(&vars, &["x"]).unwrap();
        assert!(g.jacobian(&["z"]).is_err());
    }

    /// Symbolic partials of the Trotman family with a=b=c=d=2 against
    /// central finite differences at rational points.
    #[test]
    fn trotman_jacobian_matches_finite_differences() {
        let vars = VarList::of(&["y", "v", "w"]);
        let g = PolyMap::parse(&vars, &["w^2 - y^2*v^2 - v^2"]).unwrap();
        let j = g.jacobian(&["y", "v", "w"]).unwrap();
        assert_eq!(j[0][0].to_string(), "-2*y*v^2");
        assert_eq!(j[0][1].to_string(), "-2*y^2*v - 2*v");
        assert_eq!(j[0][2].to_string(), "2*w");

        let pts = [
            [rat(1), rat(2), rat(3)],
            [ratio(3, 7), rat(-5), ratio(1, 2)],
            [rat(-2), ratio(-4, 9), rat(11)],
        ];
        let g0 = &g.components()[0];
        for p in &pts {
            for (k, d) in j[0].iter().enumerate() {
                // g is a polynomial of degree <= 2 in each variable, so the
                // central difference with any step is exact.
                let h = ratio(1, 1000);
                let mut plus = p.to_vec();
                let mut minus = p.to_vec();
                plus[k] += &h;
                minus[k] -= &h;
                let fd = (g0.evaluate(&plus) - g0.evaluate(&minus)) / (rat(2) * &h);
                assert_eq!(fd, d.evaluate(p));
            }
        }
    }
}
