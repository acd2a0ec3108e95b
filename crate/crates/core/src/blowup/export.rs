//! Plain-text exports of a blow-up state.

use serde_json::json;

use super::state::BlowupState;

/// Manifest: stage count, per-stage ε and `d_n`, disk bounding boxes.
pub fn manifest_json(state: &BlowupState) -> String {
    let cfg = state.config();
    let chart = state.chart();
    let stages: Vec<_> = state
        .stage_records()
        .iter()
        .map(|s| {
            json!({
                "stage": s.stage,
                "gap_bound": s.gap.value,
                "eps_plus": s.eps_plus,
                "eps_minus": s.eps_minus,
                "annulus_plus": s.annulus_plus,
                "annulus_minus": s.annulus_minus,
                "perturbation": s.perturbation,
            })
        })
        .collect();
    let disks: Vec<_> = state
        .disks()
        .iter()
        .map(|d| {
            json!({
                "index": d.index,
                "stage": d.stage,
                "bbox": [d.bbox.lo.x, d.bbox.lo.y, d.bbox.hi.x, d.bbox.hi.y],
                "marker": [d.marker.x, d.marker.y],
                "diameter": d.diameter(),
            })
        })
        .collect();
    let doc = json!({
        "map": state.base().label(),
        "stages": state.stage(),
        "center": [chart.center.x, chart.center.y],
        "delta0": chart.delta0,
        "eps0": cfg.eps0,
        "samples": cfg.samples,
        "inflation": cfg.inflation,
        "diameter_estimate": "sampled",
        "tail_bound": state.tail_bound(),
        "stage_records": stages,
        "disks": disks,
    });
    serde_json::to_string_pretty(&doc).expect("manifest serializes") + "\n"
}

/// Boundary polylines, one row per vertex: `disk,vertex,x,y`.
pub fn boundaries_csv(state: &BlowupState) -> String {
    let mut out = String::from("disk,vertex,x,y\n");
    for d in state.disks() {
        for (i, p) in d.boundary.iter().enumerate() {
            out.push_str(&format!("{},{},{:.17e},{:.17e}\n", d.index, i, p.x, p.y));
        }
    }
    out
}
