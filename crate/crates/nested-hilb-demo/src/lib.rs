//! Browser bindings for the nested Hilbert scheme toolkit. Each export
//! takes plain numbers or a JSON string and returns a JSON string, so the
//! page needs no generated glue beyond the wasm-bindgen loader. All
//! computation is exact; inputs are clamped to desk scale so a stray form
//! value cannot wedge the browser tab.

use wasm_bindgen::prelude::wasm_bindgen;

use nested_hilb::lattice::hilbert_series;
use nested_hilb::lattice::{enumerate_p, lift_decompose, sum_decompose, PointSet};
use nested_hilb::localization::chi_series;

const MAX_N: usize = 4;
const MAX_TWIST: i64 = 4;
const MAX_DEGREE: i64 = 10;

fn err_json(msg: &str) -> String {
    serde_json::json!({ "error": msg }).to_string()
}

fn check_params(n: usize, m: i64, k: i64, d: i64) -> Option<String> {
    if n > MAX_N {
        return Some(err_json(&format!("n must be at most {MAX_N}")));
    }
    if !(0..=MAX_TWIST).contains(&m) || !(0..=MAX_TWIST).contains(&k) || m + k > MAX_TWIST {
        return Some(err_json(&format!(
            "need 0 <= m, k and m + k <= {MAX_TWIST}"
        )));
    }
    if !(0..=MAX_DEGREE).contains(&d) {
        return Some(err_json(&format!(
            "degree must be between 0 and {MAX_DEGREE}"
        )));
    }
    None
}

/// Dimension series of the sections of `O(m,k)` along the localization
/// and lattice routes, with an exact equality verdict.
///
/// Returns `{"D", "equal", "chi": [[dq,dt,c],..], "hilbert": [[dq,dt,c],..]}`.
#[wasm_bindgen]
pub fn series_table(n: usize, m: i64, k: i64, d: i64) -> String {
    if let Some(e) = check_params(n, m, k, d) {
        return e;
    }
    let chi = match chi_series(n, m, k, d) {
        Ok(s) => s,
        Err(e) => return err_json(&e.to_string()),
    };
    let hilbert = hilbert_series(n, m, k, d);
    serde_json::json!({
        "n": n, "m": m, "k": k, "D": d,
        "equal": chi.first_mismatch(&hilbert).is_none(),
        "chi": chi.to_json_coeffs(),
        "hilbert": hilbert.to_json_coeffs(),
    })
    .to_string()
}

/// Elements of the trailing-term lattice set with separation `m` and
/// support `k`, up to total degree `d`, each paired with its unlift.
///
/// Returns `{"points": [{"set": [[a,b],..], "unlifted": [[a,b],..],
/// "degree": v}, ...]}` sorted by degree.
#[wasm_bindgen]
pub fn lattice_points(n: usize, m: i64, k: i64, d: i64) -> String {
    if let Some(e) = check_params(n, m, k, d) {
        return e;
    }
    if n == 0 {
        return err_json("n must be at least 1");
    }
    let mut pts = enumerate_p(n, m, k, d);
    pts.sort_by_key(|p| (p.total_degree(), p.clone()));
    let rows: Vec<serde_json::Value> = pts
        .iter()
        .map(|p| {
            serde_json::json!({
                "set": p.to_json(),
                "unlifted": p.k_unlift(k).expect("members unlift").to_json(),
                "degree": p.total_degree(),
            })
        })
        .collect();
    serde_json::json!({ "n": n, "m": m, "k": k, "D": d, "count": rows.len(), "points": rows })
        .to_string()
}

/// Decomposes a point tuple into `m` distinct-point summands and, when it
/// exists, distributes the lift level `k` over the summands.
///
/// `points_json` is `[[a,b], ...]`. Returns the sorted input, membership
/// verdicts, the summands or `null`, and the lifted data.
#[wasm_bindgen]
pub fn decompose_points(points_json: &str, m: usize, k: i64) -> String {
    if m == 0 || m > MAX_TWIST as usize {
        return err_json(&format!("need 1 <= m <= {MAX_TWIST}"));
    }
    if !(0..=MAX_TWIST).contains(&k) {
        return err_json(&format!("need 0 <= k <= {MAX_TWIST}"));
    }
    let parsed: Vec<(i64, i64)> = match serde_json::from_str::<Vec<[i64; 2]>>(points_json) {
        Ok(v) => v.into_iter().map(|[a, b]| (a, b)).collect(),
        Err(e) => return err_json(&format!("bad point list: {e}")),
    };
    if parsed.is_empty() || parsed.len() > MAX_N {
        return err_json(&format!("need 1 to {MAX_N} points"));
    }
    if parsed
        .iter()
        .any(|&(a, b)| a < 0 || b < 0 || a + b > 2 * MAX_DEGREE)
    {
        return err_json("coordinates must be nonnegative and small");
    }
    let s = PointSet::new(parsed);
    let summands = sum_decompose(&s, m);
    let lift = summands.as_ref().filter(|_| k > 0).map(|parts| {
        let ks = lift_decompose(parts, k);
        let lifted: Vec<serde_json::Value> = parts
            .iter()
            .zip(&ks)
            .map(|(p, &ki)| p.k_lift(ki).to_json())
            .collect();
        serde_json::json!({ "split": ks, "summands": lifted })
    });
    serde_json::json!({
        "input": s.to_json(),
        "m": m, "k": k,
        "in_p_m0": s.in_p(m as i64, 0),
        "lifted_input": s.k_lift(k).to_json(),
        "in_p_mk_of_lift": s.k_lift(k).in_p(m as i64, k),
        "summands": summands.as_ref().map(|ps| {
            ps.iter().map(|p| p.to_json()).collect::<Vec<_>>()
        }),
        "lift": lift,
    })
    .to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_table_reports_equality() {
        let v: serde_json::Value = serde_json::from_str(&series_table(2, 1, 1, 6)).unwrap();
        assert_eq!(v["equal"], serde_json::json!(true));
        assert_eq!(v["chi"], v["hilbert"]);
    }

    #[test]
    fn series_table_rejects_oversized_input() {
        let v: serde_json::Value = serde_json::from_str(&series_table(9, 1, 1, 6)).unwrap();
        assert!(v["error"].is_string());
    }

    #[test]
    fn lattice_points_unlift_round_trip() {
        let v: serde_json::Value = serde_json::from_str(&lattice_points(2, 2, 1, 5)).unwrap();
        let pts = v["points"].as_array().unwrap();
        assert!(!pts.is_empty());
        assert_eq!(v["count"], serde_json::json!(pts.len()));
        // First entries are the degree-3 minimal elements.
        assert_eq!(pts[0]["set"], serde_json::json!([[0, 1], [1, 1]]));
    }

    #[test]
    fn decompose_points_matches_the_cli_behavior() {
        let v: serde_json::Value =
            serde_json::from_str(&decompose_points("[[0,0],[0,2],[1,2],[2,1]]", 2, 1)).unwrap();
        assert_eq!(v["in_p_m0"], serde_json::json!(true));
        assert_eq!(v["lift"]["split"], serde_json::json!([0, 1]));
        let v: serde_json::Value =
            serde_json::from_str(&decompose_points("[[0,0],[0,2],[1,1],[2,1]]", 2, 0)).unwrap();
        assert_eq!(v["summands"], serde_json::Value::Null);
        assert_eq!(v["in_p_m0"], serde_json::json!(false));
    }

    #[test]
    fn decompose_points_rejects_garbage() {
        let v: serde_json::Value =
            serde_json::from_str(&decompose_points("[[0,0],[0", 2, 0)).unwrap();
        assert!(v["error"].is_string());
    }
}
