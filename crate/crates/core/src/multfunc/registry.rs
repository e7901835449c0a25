//! Name-addressable function registry: `"two_squares"`, `"delta_omega:0.5"`, ...

use crate::error::{Error, Result};

use super::function::MultiplicativeFunction;

/// Names understood by [`resolve`].
pub const REGISTERED: &[&str] = &[
    "all_one",
    "delta_omega",
    "two_squares",
    "split_primes_gaussian",
    "abs_lambda_delta",
    "divisor_d",
];

/// Build a function from `name[:p1,p2,...]`. `max_arg` is the largest argument
/// the caller intends to evaluate; functions backed by finite coefficient
/// tables are built to cover it.
pub fn resolve(spec: &str, max_arg: u64) -> Result<MultiplicativeFunction> {
    let (name, params) = match spec.split_once(':') {
        Some((n, p)) => (n.trim(), p.trim()),
        None => (spec.trim(), ""),
    };
    let params: Vec<f64> = if params.is_empty() {
        Vec::new()
    } else {
        params
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::InvalidArgument(format!("parameter `{s}` of {name}: {e}")))
            })
            .collect::<Result<_>>()?
    };
    let arity = |n: usize| -> Result<()> {
        if params.len() != n {
            return Err(Error::InvalidArgument(format!(
                "{name} takes {n} parameter(s), got {}",
                params.len()
            )));
        }
        Ok(())
    };
    match name {
        "all_one" => {
            arity(0)?;
            Ok(MultiplicativeFunction::all_one())
        }
        "delta_omega" => {
            arity(1)?;
            MultiplicativeFunction::delta_omega(params[0])
        }
        "two_squares" => {
            arity(0)?;
            Ok(MultiplicativeFunction::two_squares())
        }
        "split_primes_gaussian" => {
            arity(0)?;
            Ok(MultiplicativeFunction::split_primes_gaussian())
        }
        "divisor_d" => {
            arity(0)?;
            Ok(MultiplicativeFunction::divisor_d())
        }
        "abs_lambda_delta" => {
            let limit = match params.as_slice() {
                [] => max_arg,
                [l] => *l as u64,
                _ => {
                    return Err(Error::InvalidArgument(
                        "abs_lambda_delta takes at most one parameter".into(),
                    ))
                }
            };
            MultiplicativeFunction::abs_lambda_delta(limit)
        }
        other => Err(Error::UnknownFunction(other.to_string())),
    }
}
