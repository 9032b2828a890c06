use clap::Parser;

fn main() {
    let cli = gdf_cli::Cli::parse();
    let (stdout, stderr) = (std::io::stdout(), std::io::stderr());
    let code = gdf_cli::run(cli, &mut stdout.lock(), &mut stderr.lock());
    std::process::exit(code);
}
