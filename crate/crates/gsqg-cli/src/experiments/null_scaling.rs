use std::sync::Arc;

use gsqg_core::nonlinearity::{null_remainder, q_apply, QuadratureSpec};
use gsqg_core::paraproduct::{balanced_remainder, paraproduct};
use gsqg_core::{Complex64, FourierField, Grid, ParaproductSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::ExperimentConfig;
use crate::datum;
use crate::error::{CliError, Context};
use crate::experiments::log_slope;
use crate::output::{Outputs, Table};
use crate::report::{Bound, Check, CriterionReport};

const AMPLITUDES: [f64; 3] = [1e-2, 5e-3, 2.5e-3];
const TRIPLES: usize = 100;

/// Amplitude scan of `‖∂x R(κφ, v)‖` and `‖∂x Q(κφ, v)‖`, then the
/// paraproduct identities on seeded random triples.
pub fn run(cfg: &ExperimentConfig, out: &mut Outputs) -> Result<Vec<CriterionReport>, CliError> {
    let model = cfg.model()?;
    let grid = cfg.grid()?;
    let quad = QuadratureSpec::for_grid(&grid);
    let shape = datum::shape(cfg, &grid);
    let v = datum::probe_direction(cfg, &grid);
    let mut table = Table::new(&["kappa", "remainder", "q"]);
    let (mut rem, mut q) = (Vec::new(), Vec::new());
    for &k in &AMPLITUDES {
        let f = shape.scale(k);
        let r = null_remainder(&f, &v, &model, &quad).during("NullScaling")?.derivative().l2_norm();
        let qq = q_apply(&f, &v, &model, &quad).during("NullScaling")?.derivative().l2_norm();
        table.push(&[k, r, qq]);
        rem.push(r);
        q.push(qq);
    }
    out.write_table("null_scaling.csv", &table)?;
    let null = CriterionReport::new(
        3,
        "null-structure order",
        vec![
            Check::new("remainder exponent", log_slope(&AMPLITUDES, &rem), Bound::Within(1.8, 2.2)),
            Check::new("Q exponent", log_slope(&AMPLITUDES, &q), Bound::Within(0.8, 1.2)),
        ],
    );
    Ok(vec![null, paraproduct_identities(&grid, cfg.seed, out)?])
}

fn random_field(grid: &Arc<Grid>, rng: &mut ChaCha8Rng) -> FourierField {
    let n = grid.n();
    let mut s = vec![Complex64::new(0.0, 0.0); n];
    // Content below n/4 so the grid product is alias-free.
    for k in 0..n / 4 {
        let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if k == 0 {
            s[0] = Complex64::new(z.re, 0.0);
        } else {
            s[k] = z;
            s[n - k] = z.conj();
        }
    }
    FourierField::from_spectrum(grid, s)
}

fn paraproduct_identities(grid: &Arc<Grid>, seed: u64, out: &mut Outputs) -> Result<CriterionReport, CliError> {
    let spec = ParaproductSpec::new(1.0).during("NullScaling")?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut table = Table::new(&["triple", "product_error", "adjoint_error"]);
    let (mut product, mut adjoint): (f64, f64) = (0.0, 0.0);
    for i in 0..TRIPLES {
        let a = random_field(grid, &mut rng);
        let u = random_field(grid, &mut rng);
        let w = random_field(grid, &mut rng);
        let tau = paraproduct(&a, &u, &spec).during("NullScaling")?;
        let tua = paraproduct(&u, &a, &spec).during("NullScaling")?;
        let pi = balanced_remainder(&a, &u, &spec).during("NullScaling")?;
        let prod = a.pointwise_mul(&u);
        let p = tau.add(&tua).add(&pi).sub(&prod).l2_norm() / (a.max_abs() * u.l2_norm());
        let lhs = tau.inner(&w);
        let rhs = u.inner(&paraproduct(&a, &w, &spec).during("NullScaling")?);
        let d = (lhs - rhs).abs() / (a.max_abs() * u.l2_norm() * w.l2_norm());
        product = product.max(p);
        adjoint = adjoint.max(d);
        table.push(&[i as f64, p, d]);
    }
    out.write_table("paraproduct_identities.csv", &table)?;
    Ok(CriterionReport::new(
        9,
        "paraproduct identities",
        vec![
            Check::new("product identity error", product, Bound::Below(1e-12)),
            Check::new("self-adjointness error", adjoint, Bound::Below(1e-10)),
        ],
    ))
}
