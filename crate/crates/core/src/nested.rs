//! Well-nested words: recognition, height and call/return matching.

use std::collections::BTreeMap;

use crate::alphabet::Sym;
use crate::error::NestingError;

/// Position of the first nesting violation, if any: a return with no open
/// call, or (reported as `w.len()`) calls left open at the end.
fn first_violation(w: &[Sym]) -> Option<usize> {
    let mut depth = 0usize;
    for (i, sym) in w.iter().enumerate() {
        match sym {
            Sym::Call(_) => depth += 1,
            Sym::Return(_) => {
                if depth == 0 {
                    return Some(i);
                }
                depth -= 1;
            }
        }
    }
    (depth != 0).then_some(w.len())
}

pub fn is_well_nested(w: &[Sym]) -> bool {
    first_violation(w).is_none()
}

pub fn check_well_nested(w: &[Sym]) -> Result<(), NestingError> {
    match first_violation(w) {
        None => Ok(()),
        Some(position) => Err(NestingError { position }),
    }
}

/// Nesting depth after each prefix: `profile[d]` is the depth after reading
/// `d` symbols, so the result has `w.len() + 1` entries.
pub fn depth_profile(w: &[Sym]) -> Result<Vec<usize>, NestingError> {
    check_well_nested(w)?;
    let mut profile = Vec::with_capacity(w.len() + 1);
    let mut depth = 0usize;
    profile.push(0);
    for sym in w {
        match sym {
            Sym::Call(_) => depth += 1,
            Sym::Return(_) => depth -= 1,
        }
        profile.push(depth);
    }
    Ok(profile)
}

/// Height of a well-nested word: h(ε)=0, h(cur)=1+h(u), h(uv)=max(h(u),h(v)).
/// This coincides with the maximal nesting depth.
pub fn height(w: &[Sym]) -> Result<usize, NestingError> {
    Ok(depth_profile(w)?.into_iter().max().unwrap_or(0))
}

/// Pairs every call position with the position of its matching return.
pub fn matching(w: &[Sym]) -> Result<BTreeMap<usize, usize>, NestingError> {
    check_well_nested(w)?;
    let mut open = Vec::new();
    let mut pairs = BTreeMap::new();
    for (i, sym) in w.iter().enumerate() {
        match sym {
            Sym::Call(_) => open.push(i),
            Sym::Return(_) => {
                let c = open.pop().expect("checked well nested");
                pairs.insert(c, i);
            }
        }
    }
    Ok(pairs)
}

/// Net stack effect of a factor, as (unmatched returns, unmatched calls).
pub fn surplus(w: &[Sym]) -> (usize, usize) {
    let mut open = 0usize;
    let mut unmatched_returns = 0usize;
    for sym in w {
        match sym {
            Sym::Call(_) => open += 1,
            Sym::Return(_) => {
                if open == 0 {
                    unmatched_returns += 1;
                } else {
                    open -= 1;
                }
            }
        }
    }
    (unmatched_returns, open)
}
