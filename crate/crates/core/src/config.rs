use crate::algebra::TermOrder;

/// Knobs shared by the expensive operations.
#[derive(Clone, Debug)]
pub struct Config {
    /// Maximum number of S-pair reductions per Gröbner basis run.
    pub budget: usize,
    /// Order used for reported bases.
    pub order: TermOrder,
    /// Degree bound on the polynomial ansatz in the field generators used
    /// by non-autonomous linear searches; `None` picks `2d + 2`.
    pub coeff_degree: Option<u32>,
    /// Number of σ and σ⁻¹ rounds tried when closing a set of coefficients.
    pub sigma_rounds: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config { budget: 50_000, order: TermOrder::Grevlex, coeff_degree: None, sigma_rounds: 4 }
    }
}

impl Config {
    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_order(mut self, order: TermOrder) -> Self {
        self.order = order;
        self
    }
}
