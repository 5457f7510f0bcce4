//! Accept probable sentences from an inconsistent lottery description.
//!
//! cargo run --release --example lottery [tickets] [delta]

use statsupport::acceptance::{lottery_demo, AcceptanceConfig};
use statsupport::rational::Rational;
use statsupport::support::EngineConfig;

fn main() -> statsupport::Result<()> {
    let mut args = std::env::args().skip(1);
    let tickets = args.next().map_or(3, |t| t.parse().expect("ticket count"));
    let delta: Rational = args.next().map_or(Rational::new(3, 5), |d| d.parse().expect("delta"));

    let config = AcceptanceConfig::new(delta, EngineConfig::default())?;
    let report = lottery_demo(tickets, &config)?;
    println!("{report}");

    // A tighter delta accepts nothing: the coin's lower bound is 49/100.
    let strict = AcceptanceConfig::new(Rational::new(1, 100), EngineConfig::default())?;
    let again = lottery_demo(tickets, &strict)?;
    println!("\nat delta 1/100: {} accepted", again.result.accepted.len());
    Ok(())
}
