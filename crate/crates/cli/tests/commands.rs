use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use chrono_free::weekdays;
use tempfile::TempDir;

/// Weekday calendar without a date crate: (year, month, day) for Mon-Fri.
mod chrono_free {
    fn days_in_month(y: i32, m: u32) -> u32 {
        match m {
            4 | 6 | 9 | 11 => 30,
            2 if (y % 4 == 0 && y % 100 != 0) || y % 400 == 0 => 29,
            2 => 28,
            _ => 31,
        }
    }

    /// Weekdays from `first_year`-01-01 through `last_year`-12-31.
    /// 2009-01-01 was a Thursday.
    pub fn weekdays(first_year: i32, last_year: i32) -> Vec<(i32, u32, u32)> {
        assert_eq!(first_year, 2009);
        let mut dow = 3; // Monday = 0
        let mut out = Vec::new();
        for y in first_year..=last_year {
            for m in 1..=12 {
                for d in 1..=days_in_month(y, m) {
                    if dow < 5 {
                        out.push((y, m, d));
                    }
                    dow = (dow + 1) % 7;
                }
            }
        }
        out
    }
}

const MONTHS: [&str; 12] = [
    "Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug", "Sep", "Oct", "Nov", "Dec",
];

fn sarima(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sarima"))
        .args(args)
        .output()
        .expect("spawn sarima")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// NSE-style daily export for 2009-2019 with a trend and a yearly cycle.
fn daily_file(dir: &TempDir) -> PathBuf {
    let mut csv = String::from("Date,Open,High,Low,Close,Shares Traded,Turnover (Rs. Cr)\n");
    for (i, (y, m, d)) in weekdays(2009, 2019).into_iter().enumerate() {
        let t = i as f64;
        let close = 3000.0 + 2.5 * t + 150.0 * (t / 21.0 * std::f64::consts::PI / 6.0).sin() + 40.0 * (t * 0.7).sin();
        csv.push_str(&format!(
            "{d:02}-{}-{y},{o:.2},{h:.2},{l:.2},\"{c}\",1000,10\n",
            MONTHS[m as usize - 1],
            o = close - 5.0,
            h = close + 10.0,
            l = close - 10.0,
            c = format_thousands(close)
        ));
    }
    let path = dir.path().join("nifty.csv");
    fs::write(&path, csv).unwrap();
    path
}

fn format_thousands(v: f64) -> String {
    let s = format!("{v:.2}");
    let (int, frac) = s.split_once('.').unwrap();
    let mut out = String::new();
    for (i, ch) in int.chars().enumerate() {
        if i > 0 && (int.len() - i) % 3 == 0 {
            out.push(',');
        }
        out.push(ch);
    }
    format!("{out}.{frac}")
}

/// Runs `ingest` and returns the path of the monthly series.
fn monthly_file(dir: &TempDir) -> PathBuf {
    let daily = daily_file(dir);
    let out = dir.path().join("ingest");
    let o = sarima(&["--input", s(&daily), "--out", s(&out), "ingest"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    out.join("series.csv")
}

fn read(p: impl AsRef<Path>) -> String {
    fs::read_to_string(p.as_ref()).unwrap_or_else(|e| panic!("{}: {e}", p.as_ref().display()))
}

#[test]
fn ingest_eleven_years_gives_132_months() {
    let dir = TempDir::new().unwrap();
    let series = monthly_file(&dir);
    let text = read(&series);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "period,value");
    assert_eq!(lines.len(), 133);
    assert!(lines[1].starts_with("2009-01,"));
    assert!(lines[132].starts_with("2019-12,"));
    let summary = read(dir.path().join("ingest/summary.json"));
    assert!(summary.contains("\"n\": 132"));
    assert!(summary.contains("\"source\": \"daily_quotes\""));
}

#[test]
fn ingest_single_month() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("jan.csv");
    fs::write(&input, "Date,Close\n2019-01-02,100\n2019-01-03,110\n").unwrap();
    let out = dir.path().join("o");
    let o = sarima(&["--input", s(&input), "--out", s(&out), "ingest"]);
    assert!(o.status.success());
    assert_eq!(read(out.join("series.csv")), "period,value\n2019-01,105\n");
}

#[test]
fn data_errors_exit_2_and_name_the_line() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "Date,Close\n2019-01-02,100\n2019-13-45,101\n").unwrap();
    let o = sarima(&["--input", s(&bad), "--out", s(dir.path()), "ingest"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));

    let gap = dir.path().join("gap.csv");
    fs::write(&gap, "Date,Close\n2019-01-02,100\n2019-03-01,101\n").unwrap();
    let o = sarima(&["--input", s(&gap), "--out", s(dir.path()), "ingest"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("2019-02"));

    let missing = dir.path().join("missing.csv");
    let o = sarima(&["--input", s(&missing), "ingest"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(sarima(&["--no-such-flag", "ingest"]).status.code(), Some(1));
    assert_eq!(sarima(&["ingest"]).status.code(), Some(1));
    assert_eq!(sarima(&["fit", "--input", "x.csv"]).status.code(), Some(1));
    assert_eq!(sarima(&["--help"]).status.code(), Some(0));
}

#[test]
fn numerical_failure_exits_3() {
    let dir = TempDir::new().unwrap();
    let flat = dir.path().join("flat.csv");
    let mut csv = String::from("period,value\n");
    for y in [2018, 2019] {
        for m in 1..=12 {
            csv.push_str(&format!("{y}-{m:02},100\n"));
        }
    }
    fs::write(&flat, csv).unwrap();
    let o = sarima(&["--input", s(&flat), "--out", s(dir.path()), "fit", "--order", "0,0,0"]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn decompose_masks_edges_with_empty_cells() {
    let dir = TempDir::new().unwrap();
    let series = monthly_file(&dir);
    let out = dir.path().join("dec");
    let o = sarima(&["--input", s(&series), "--out", s(&out), "--plots", "decompose"]);
    assert!(o.status.success());
    let text = read(out.join("decomposition.csv"));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "period,observed,trend,seasonal,residual");
    assert_eq!(lines.len(), 133);
    let cells = |i: usize| lines[i].split(',').map(str::to_string).collect::<Vec<_>>();
    for i in (1..=6).chain(127..=132) {
        let c = cells(i);
        assert!(c[2].is_empty() && c[4].is_empty(), "row {i}: {:?}", c);
        assert!(!c[3].is_empty());
    }
    for i in 7..=126 {
        let c: Vec<f64> = cells(i)[1..].iter().map(|v| v.parse().unwrap()).collect();
        assert!((c[1] + c[2] + c[3] - c[0]).abs() < 1e-9);
    }
    assert_eq!(read(out.join("fig4_decomposition.csv")), text);
    assert!(read(out.join("fig4_decomposition.svg")).starts_with("<svg"));
}

#[test]
fn select_writes_ranking_and_winner() {
    let dir = TempDir::new().unwrap();
    let series = monthly_file(&dir);
    let out = dir.path().join("sel");
    let o = sarima(&[
        "--input", s(&series), "--out", s(&out), "--jobs", "2", "select", "--grid", "0", "--grid-p", "0..1",
        "--grid-d", "1", "--grid-D", "0..1",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let ranking = read(out.join("ranking.csv"));
    let lines: Vec<&str> = ranking.lines().collect();
    assert_eq!(lines[0], "p,d,q,P,D,Q,m,k,loglik,aic,converged");
    assert_eq!(lines.len(), 5);
    let aics: Vec<f64> = lines[1..].iter().map(|l| l.split(',').nth(9).unwrap().parse().unwrap()).collect();
    assert!(aics.windows(2).all(|w| w[0] <= w[1]));
    let summary = read(out.join("selection.json"));
    assert!(summary.contains("\"attempted\": 4"));
    assert!(summary.contains("\"winner\""));
}

#[test]
fn fit_backtest_validate_forecast() {
    let dir = TempDir::new().unwrap();
    let series = monthly_file(&dir);
    let model = ["--order", "1,1,0", "--seasonal", "0,1,1,12"];
    let run = |name: &str, extra: &[&str]| {
        let out = dir.path().join(name);
        let mut args = vec!["--input", s(&series), "--out", s(&out), "--plots", name];
        args.extend_from_slice(&model);
        args.extend_from_slice(extra);
        let o = sarima(&args);
        assert!(o.status.success(), "{name}: {}", String::from_utf8_lossy(&o.stderr));
        (out, String::from_utf8_lossy(&o.stdout).into_owned())
    };

    let (out, stdout) = run("fit", &["--end", "2017-12"]);
    assert!(stdout.contains("ar.L1") && stdout.contains("ma.S.L12") && stdout.contains("sigma2"));
    let fit_json = read(out.join("fit.json"));
    assert!(fit_json.contains("\"n_effective\": 95"));

    let (out, _) = run("backtest", &["--window", "2018-01:2018-12"]);
    let bt = read(out.join("backtest.csv"));
    assert_eq!(bt.lines().next(), Some("period,actual,predicted"));
    assert_eq!(bt.lines().count(), 13);
    assert_eq!(read(out.join("fig5_backtest.csv")), bt);

    let (out, stdout) = run("validate", &["--holdout", "2019-01:2019-06"]);
    assert!(stdout.contains("Mean Absolute Percentage Error"));
    assert_eq!(read(out.join("holdout.csv")).lines().count(), 7);
    assert_eq!(read(out.join("metrics.txt")).lines().count(), 5);

    let (out, _) = run("forecast", &["--horizon", "12"]);
    let fc = read(out.join("forecast.csv"));
    let lines: Vec<&str> = fc.lines().collect();
    assert_eq!(lines[0], "period,point,lo,hi");
    assert_eq!(lines.len(), 13);
    assert!(lines[1].starts_with("2020-01,"));
    assert!(lines[12].starts_with("2020-12,"));
    for l in &lines[1..] {
        let v: Vec<f64> = l.split(',').skip(1).map(|x| x.parse().unwrap()).collect();
        assert!(v[1] < v[0] && v[0] < v[2]);
    }
}

#[test]
fn pipeline_with_white_noise_grid() {
    let dir = TempDir::new().unwrap();
    let series = monthly_file(&dir);
    let out = dir.path().join("pipe");
    let o = sarima(&["--input", s(&series), "--out", s(&out), "--plots", "pipeline", "--grid", "0..0"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report = read(out.join("report.json"));
    assert!(report.contains("\"status\": \"ok\""));
    assert!(report.contains("SARIMA(0,0,0)x(0,0,0,12)"));
    for key in ["\"mape\"", "\"me\"", "\"mae\"", "\"mpe\"", "\"rmse\""] {
        assert!(report.contains(key));
    }
    assert_eq!(report.matches("\"point\"").count(), 12);
    // every figure has its twin
    for entry in fs::read_dir(&out).unwrap() {
        let p = entry.unwrap().path();
        if p.extension().is_some_and(|e| e == "svg") {
            assert!(p.with_extension("csv").exists(), "{} has no twin", p.display());
        }
    }
    assert!(out.join("fig8_aic_rank.svg").exists());
}

#[test]
fn pipeline_rejects_overlapping_windows() {
    let dir = TempDir::new().unwrap();
    let series = monthly_file(&dir);
    let out = dir.path().join("bad");
    let o = sarima(&[
        "--input", s(&series), "--out", s(&out), "pipeline", "--grid", "0..0", "--holdout", "2017-06:2017-12",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let report = read(out.join("report.json"));
    assert!(report.contains("\"status\": \"failed\""));
    assert!(report.contains("\"exit_code\": 1"));

    let o = sarima(&[
        "--input", s(&series), "--out", s(&out), "pipeline", "--grid", "0..0", "--backtest", "2017-06:2018-12",
    ]);
    assert_eq!(o.status.code(), Some(1));
}
