use rstkit::analysis::{
    chi2_residuals, confusion, error_table, per_class_accuracy, AttachmentFilter, ContingencyTable, ErrorCount,
};
use rstkit::relmap::{LabelMode, Scheme};
use rstkit::treebank::{parse_rsd, DepDocument};

const GUM: LabelMode = LabelMode::Coarse(Scheme::Gum);

/// A how-to text: steps joined in a list, each with a condition.
fn howto(condition_label: &str) -> DepDocument {
    let mut lines = vec!["1\tPreheat the oven .\t0\troot".to_owned()];
    for step in 0..5 {
        let cond = 2 + 2 * step;
        lines.push(format!(
            "{cond}\tIf the dough is sticky ,\t{}\t{condition_label}",
            cond + 1
        ));
        lines.push(format!("{}\tadd more flour .\t1\tjoint-list", cond + 1));
    }
    parse_rsd(&(lines.join("\n") + "\n"), "howto_1").unwrap()
}

#[test]
fn five_contingency_predicted_as_context() {
    let gold = [howto("contingency-condition")];
    let pred = [howto("context-circumstance")];
    let m = confusion(&gold, &pred, GUM, AttachmentFilter::CorrectAttachment).unwrap();
    assert_eq!(m.get("Contingency", "Context"), 5);
    assert_eq!(m.get("Joint", "Joint"), 5);
    assert_eq!(m.off_diagonal(), 5);
    let acc = per_class_accuracy(&gold, &pred, GUM).unwrap();
    assert_eq!(acc["Contingency"], 0.0);
    assert_eq!(acc["Joint"], 1.0);

    let csv = m.to_csv();
    assert_eq!(csv.lines().next().unwrap(), "gold\\pred,Context,Contingency,Joint,root");
    assert!(csv.contains("\nContingency,5,0,0,0\n"));
    let heat: serde_json::Value = serde_json::from_str(&m.to_heatmap_json()).unwrap();
    assert_eq!(heat["values"][1][0], 5);
    assert_eq!(heat["x_labels"].as_array().unwrap().len(), 4);
}

#[test]
fn confusion_rows_sum_to_gold_counts() {
    let gold = [howto("contingency-condition")];
    let m = confusion(&gold, &gold, GUM, AttachmentFilter::All).unwrap();
    assert_eq!(m.row_total("Contingency"), 5);
    assert_eq!(m.row_total("Joint"), 5);
    assert_eq!(m.row_total("root"), 1);
    assert_eq!(m.off_diagonal(), 0);
}

#[test]
fn error_table_counts_misclassified_by_default() {
    let g = howto("contingency-condition");
    let p = howto("context-circumstance");
    let errors = error_table([("how-to", &g, &p), ("news", &g, &g)], GUM, ErrorCount::Misclassified).unwrap();
    assert_eq!(errors.rows, ["how-to", "news"]);
    assert_eq!(errors.cols, ["Contingency"]);
    assert_eq!(errors.counts, [[5.0], [0.0]]);
    let all = error_table([("how-to", &g, &p), ("news", &g, &g)], GUM, ErrorCount::All).unwrap();
    assert_eq!(all.cols, ["Contingency", "Joint", "root"]);
    assert_eq!(all.counts[1], [5.0, 5.0, 1.0]);
}

#[test]
fn residuals_two_by_two() {
    let t = ContingencyTable {
        rows: vec!["a".into(), "b".into()],
        cols: vec!["x".into(), "y".into()],
        counts: vec![vec![10.0, 0.0], vec![0.0, 10.0]],
    };
    let r = chi2_residuals(&t).unwrap();
    for v in r.residuals.iter().flatten() {
        assert!((v.abs() - 5f64.sqrt()).abs() < 1e-9);
    }
    assert_eq!(r.max_abs_by_row()[0].1, "x");
    assert!(r.to_csv().starts_with("row,x,y\na,2.236068,-2.236068\n"));
}
