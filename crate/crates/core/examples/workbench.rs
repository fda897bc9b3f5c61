//! The command line driven in-process over the bundled fixtures.

use dg_workbench::cli::run;

fn main() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");
    let calls: [&[&str]; 4] = [
        &["validate", "koszul.json"],
        &["cohomology", "twin.json", "--degree", "-1", "--format", "text"],
        &["cover", "atlas_single.json", "--format", "text"],
        &["hypercover", "atlas_cover.json", "--levels", "2"],
    ];
    for args in calls {
        let mut argv = vec!["dgwb".to_string()];
        argv.extend(args.iter().map(|a| if a.ends_with(".json") { format!("{dir}/{a}") } else { a.to_string() }));
        let out = run(&argv);
        println!("$ dgwb {}  (exit {})", args.join(" "), out.code);
        print!("{}", out.stdout.lines().filter(|l| l.contains("status") || l.contains("rank") || l.contains("factor_counts")).map(|l| format!("{l}\n")).collect::<String>());
    }
}
