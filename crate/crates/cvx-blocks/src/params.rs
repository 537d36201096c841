use crate::error::BlocksError;

/// Scale, speed, and oscillation parameters shared by the jet constructions.
///
/// `lambda` is the base spatial frequency, `r_perp` and `r_par` the
/// concentration scales across and along the jet axis, `mu`/`mu_bar` the
/// travelling speeds of the transport and dissipative variants, `sigma` and
/// `eta` the temporal oscillation frequency and concentration width. `zeta`
/// (shell width) and `exponent_budget` are carried along for the callers that
/// size perturbations off these blocks.
#[derive(Debug, Clone)]
pub struct JetParams {
    pub lambda: u64,
    pub r_perp: f64,
    pub r_par: f64,
    pub mu: f64,
    pub mu_bar: f64,
    pub sigma: u64,
    pub eta: f64,
    pub zeta: f64,
    pub exponent_budget: u32,
}

const REL_SLACK: f64 = 1e-12;

impl JetParams {
    /// The canonical choice: `mu = r_par^{-1/2} r_perp^{-(d-1)/2}`,
    /// `sigma = lambda^(1/(2N))` (which must come out integral),
    /// `mu_bar = mu * sigma`.
    pub fn standard(
        d: usize,
        lambda: u64,
        r_perp: f64,
        r_par: f64,
        exponent_budget: u32,
    ) -> Result<JetParams, BlocksError> {
        if d != 2 && d != 3 {
            return Err(BlocksError::InvalidDimension(d));
        }
        if exponent_budget == 0 {
            return Err(BlocksError::InvalidParams(
                "exponent budget must be positive".into(),
            ));
        }
        let mu = r_par.powf(-0.5) * r_perp.powf(-0.5 * (d as f64 - 1.0));
        let sigma_f = (lambda as f64).powf(1.0 / (2.0 * exponent_budget as f64));
        let sigma = sigma_f.round();
        if sigma < 1.0 || (sigma_f - sigma).abs() > 1e-6 * sigma {
            return Err(BlocksError::InvalidParams(format!(
                "lambda^(1/(2N)) = {sigma_f} is not a natural number"
            )));
        }
        let params = JetParams {
            lambda,
            r_perp,
            r_par,
            mu,
            mu_bar: mu * sigma,
            sigma: sigma as u64,
            eta: 1.0 / lambda as f64,
            zeta: 20.0,
            exponent_budget,
        };
        params.validate()?;
        Ok(params)
    }

    /// Check the scale-separation chain `1/lambda <= r_perp/4 <= r_par/16
    /// <= 1/64` and the integrality of `lambda * r_perp`.
    pub fn validate(&self) -> Result<(), BlocksError> {
        let lam = self.lambda as f64;
        if self.lambda == 0 {
            return Err(BlocksError::InvalidParams("lambda must be positive".into()));
        }
        let chain = [
            (1.0 / lam, self.r_perp / 4.0, "1/lambda <= r_perp/4"),
            (self.r_perp / 4.0, self.r_par / 16.0, "r_perp/4 <= r_par/16"),
            (self.r_par / 16.0, 1.0 / 64.0, "r_par/16 <= 1/64"),
        ];
        for (lo, hi, label) in chain {
            if lo > hi * (1.0 + REL_SLACK) {
                return Err(BlocksError::InvalidParams(format!(
                    "scale separation violated: {label} fails ({lo:.3e} > {hi:.3e})"
                )));
            }
        }
        let prod = lam * self.r_perp;
        if (prod - prod.round()).abs() > 1e-9 * prod.max(1.0) || prod.round() < 1.0 {
            return Err(BlocksError::InvalidParams(format!(
                "lambda * r_perp = {prod} is not a natural number"
            )));
        }
        if !(self.mu > 0.0) || !(self.mu_bar > 0.0) {
            return Err(BlocksError::InvalidParams(
                "oscillation speeds must be positive".into(),
            ));
        }
        if self.sigma == 0 {
            return Err(BlocksError::InvalidParams("sigma must be positive".into()));
        }
        if !(self.eta > 0.0 && self.eta < 1.0) {
            return Err(BlocksError::InvalidParams(format!(
                "temporal width eta = {} must lie in (0,1)",
                self.eta
            )));
        }
        if !(self.zeta > 0.0) {
            return Err(BlocksError::InvalidParams(
                "shell width zeta must be positive".into(),
            ));
        }
        Ok(())
    }

    /// `lambda * r_perp` as the integer the validation guarantees it to be.
    pub fn lambda_r_perp(&self) -> u64 {
        (self.lambda as f64 * self.r_perp).round() as u64
    }
}
