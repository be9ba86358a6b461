use std::fmt::Write as _;
use std::io::{self, Write};

use super::ResultRow;

/// Frozen metric columns followed by the flag column.
pub const CSV_HEADER: &str =
    "policy,r_mcc,mean_mcc_arrivals,pct_mcc_served,pct_mbb_served,mbb_throughput,reps,se_mcc,se_mbb,se_thr,flags";

/// Fixed-point rendering with six significant digits, e.g. `0.100000`,
/// `13729.4`, `1234570`.
pub fn format_sig6(x: f64) -> String {
    if x == 0.0 {
        return "0.00000".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    // `{:.5e}` rounds to six significant digits and reports the exponent
    // after rounding.
    let sci = format!("{x:.5e}");
    let exp: i32 = sci
        .rsplit_once('e')
        .and_then(|(_, e)| e.parse().ok())
        .expect("scientific notation");
    if exp <= 5 {
        format!("{:.*}", (5 - exp) as usize, x)
    } else {
        let rounded: f64 = sci.parse().expect("round trip");
        format!("{rounded:.0}")
    }
}

pub fn write_results_csv<W: Write>(mut w: W, rows: &[ResultRow]) -> io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in rows {
        let nums = [
            r.r_mcc,
            r.mean_mcc_arrivals,
            r.pct_mcc_served,
            r.pct_mbb_served,
            r.mbb_throughput,
        ]
        .map(format_sig6)
        .join(",");
        let se = [r.se_mcc, r.se_mbb, r.se_thr].map(format_sig6).join(",");
        writeln!(w, "{},{nums},{},{se},{}", r.arm, r.reps, r.flags)?;
    }
    Ok(())
}

/// Gnuplot script drawing three stacked panels from the CSV: MCC services
/// served, MBB throughput and MBB services served, all against the mean
/// number of MCC arrivals per time unit.
pub fn gnuplot_script(csv_name: &str, arms: &[String]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set terminal pngcairo size 1500,450");
    let _ = writeln!(s, "set output 'figures.png'");
    let _ = writeln!(s, "set key outside bottom center horizontal");
    let _ = writeln!(s, "set grid");
    let _ = writeln!(s, "set xlabel 'mean MCC arrivals per time unit'");
    let _ = writeln!(s, "set multiplot layout 1,3");
    let panels = [
        (4, "MCC services served (%)"),
        (6, "MBB throughput (bits/ms)"),
        (5, "MBB services served (%)"),
    ];
    for (col, label) in panels {
        let _ = writeln!(s, "set ylabel '{label}'");
        let series: Vec<String> = arms
            .iter()
            .map(|a| {
                format!(
                    "'{csv_name}' using 3:(strcol(1) eq '{a}' ? ${col} : 1/0) with linespoints title '{a}'"
                )
            })
            .collect();
        let _ = writeln!(s, "plot {}", series.join(", \\\n     "));
    }
    let _ = writeln!(s, "unset multiplot");
    s
}
