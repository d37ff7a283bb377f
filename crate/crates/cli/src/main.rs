use std::io::Write;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let out = beauville_cli::run(std::env::args_os());
    let text = serde_json::to_string_pretty(&out.doc).expect("values serialise");
    let _ = writeln!(std::io::stdout().lock(), "{text}");
    std::process::exit(out.code);
}
