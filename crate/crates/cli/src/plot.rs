//! Standalone gnuplot scripts for the emitted CSV files.

use std::fmt::Write as _;

const PREAMBLE: &str = "set datafile separator ','\nset key autotitle columnhead\nset grid\n";

pub struct Series {
    pub file: String,
    pub using: String,
    pub title: String,
    pub style: &'static str,
}

impl Series {
    pub fn new(file: &str, using: &str, title: impl Into<String>) -> Self {
        Series {
            file: file.to_string(),
            using: using.to_string(),
            title: title.into(),
            style: "linespoints",
        }
    }

    pub fn lines(mut self) -> Self {
        self.style = "lines";
        self
    }

    pub fn boxes(mut self) -> Self {
        self.style = "boxes";
        self
    }
}

pub struct Plot {
    pub output: String,
    pub title: String,
    pub xlabel: String,
    pub ylabel: String,
    pub log_xy: bool,
    pub series: Vec<Series>,
}

impl Plot {
    pub fn new(output: &str, title: &str, xlabel: &str, ylabel: &str) -> Self {
        Plot {
            output: output.to_string(),
            title: title.to_string(),
            xlabel: xlabel.to_string(),
            ylabel: ylabel.to_string(),
            log_xy: false,
            series: Vec::new(),
        }
    }

    pub fn log(mut self) -> Self {
        self.log_xy = true;
        self
    }

    pub fn with(mut self, s: Series) -> Self {
        self.series.push(s);
        self
    }

    fn boxes(&self) -> bool {
        self.series.iter().any(|s| s.style == "boxes")
    }

    pub fn render(&self) -> String {
        let mut out = String::from(PREAMBLE);
        writeln!(out, "set terminal pngcairo size 800,600").unwrap();
        writeln!(out, "set output '{}'", self.output).unwrap();
        writeln!(out, "set title \"{}\"", self.title).unwrap();
        writeln!(out, "set xlabel \"{}\"", self.xlabel).unwrap();
        writeln!(out, "set ylabel \"{}\"", self.ylabel).unwrap();
        if self.boxes() {
            writeln!(
                out,
                "set style fill solid 0.5\nset boxwidth 0.6\nset yrange [0:*]"
            )
            .unwrap();
        }
        if self.log_xy {
            writeln!(out, "set logscale xy\nset format y '%.0e'").unwrap();
        }
        let parts: Vec<String> = self
            .series
            .iter()
            .map(|s| {
                format!(
                    "'{}' using {} with {} title \"{}\"",
                    s.file, s.using, s.style, s.title
                )
            })
            .collect();
        writeln!(out, "plot {}", parts.join(", \\\n     ")).unwrap();
        out
    }
}
