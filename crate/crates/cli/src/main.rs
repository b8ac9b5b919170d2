use clap::Parser;

fn main() {
    let cli = bitw_cli::Cli::parse();
    match bitw_cli::run(&cli) {
        Ok(out) => print!("{}{}", out, if out.ends_with('\n') { "" } else { "\n" }),
        Err(e) => {
            eprintln!("error: {}", e.message);
            std::process::exit(e.code);
        }
    }
}
