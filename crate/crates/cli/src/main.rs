use std::io::Write;

fn main() {
    let out = inbits_cli::run_command(std::env::args_os());
    if !out.rendered.is_empty() {
        print!("{}", out.rendered);
        let _ = std::io::stdout().flush();
    }
    if !out.diagnostics.is_empty() {
        eprint!("{}", out.diagnostics);
    }
    std::process::exit(out.exit_code);
}
