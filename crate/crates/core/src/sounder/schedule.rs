use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::BeamGrids;
use crate::channel::BandId;

/// One band slot of one TDM measurement block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanEntry {
    pub block: usize,
    pub band_id: BandId,
    pub tx_beam: Option<usize>,
    pub rx_beam: Option<usize>,
    pub active: bool,
}

/// Dual-band TDM scan: every block measures one 24 GHz and one 60 GHz beam pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanSchedule {
    pub n_blocks: usize,
    /// Two entries per block, 24 GHz slot first.
    pub entries: Vec<ScanEntry>,
}

impl ScanSchedule {
    pub fn active(&self, band: BandId) -> impl Iterator<Item = &ScanEntry> {
        self.entries.iter().filter(move |e| e.active && e.band_id == band)
    }

    /// CSV with header `block,band,tx_beam,rx_beam,active`; inactive slots leave
    /// the beam columns empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("block,band,tx_beam,rx_beam,active\n");
        let opt = |v: Option<usize>| v.map(|i| i.to_string()).unwrap_or_default();
        for e in &self.entries {
            writeln!(
                out,
                "{},{},{},{},{}",
                e.block,
                e.band_id,
                opt(e.tx_beam),
                opt(e.rx_beam),
                e.active
            )
            .unwrap();
        }
        out
    }
}

/// The 60 GHz grid fixes the block count (tx-major order); the 25 pairs of the
/// 24 GHz grid take the first blocks' 24 GHz slots, the rest stay idle.
pub fn build_scan_schedule(grids24: &BeamGrids, grids60: &BeamGrids) -> ScanSchedule {
    let (n_tx60, n_rx60) = (grids60.tx.len(), grids60.rx.len());
    let (n_tx24, n_rx24) = (grids24.tx.len(), grids24.rx.len());
    let n_blocks = n_tx60 * n_rx60;
    assert!(
        n_tx24 * n_rx24 <= n_blocks,
        "24 GHz grid has more pairs than the 60 GHz scan has blocks"
    );
    let mut entries = Vec::with_capacity(2 * n_blocks);
    for block in 0..n_blocks {
        let pair24 = (block < n_tx24 * n_rx24).then(|| (block / n_rx24, block % n_rx24));
        entries.push(ScanEntry {
            block,
            band_id: BandId::Band24,
            tx_beam: pair24.map(|p| p.0),
            rx_beam: pair24.map(|p| p.1),
            active: pair24.is_some(),
        });
        entries.push(ScanEntry {
            block,
            band_id: BandId::Band60,
            tx_beam: Some(block / n_rx60),
            rx_beam: Some(block % n_rx60),
            active: true,
        });
    }
    ScanSchedule { n_blocks, entries }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::BandConfig;
    use std::collections::BTreeSet;

    fn schedule() -> ScanSchedule {
        build_scan_schedule(
            &BeamGrids::for_band(&BandConfig::new(BandId::Band24)),
            &BeamGrids::for_band(&BandConfig::new(BandId::Band60)),
        )
    }

    #[test]
    fn block_count_and_bijections() {
        let s = schedule();
        assert_eq!(s.n_blocks, 132);
        assert_eq!(s.entries.len(), 264);

        let p60: BTreeSet<_> = s.active(BandId::Band60).map(|e| (e.tx_beam, e.rx_beam)).collect();
        assert_eq!(s.active(BandId::Band60).count(), 132);
        assert_eq!(p60.len(), 132);
        assert!(p60.iter().all(|(t, r)| t.unwrap() < 11 && r.unwrap() < 12));

        let p24: BTreeSet<_> = s.active(BandId::Band24).map(|e| (e.tx_beam, e.rx_beam)).collect();
        assert_eq!(s.active(BandId::Band24).count(), 25);
        assert_eq!(p24.len(), 25);
        assert!(s.active(BandId::Band24).all(|e| e.block < 25));
    }

    #[test]
    fn csv_is_deterministic() {
        let a = schedule().to_csv();
        let b = schedule().to_csv();
        assert_eq!(a, b);
        let mut lines = a.lines();
        assert_eq!(lines.next(), Some("block,band,tx_beam,rx_beam,active"));
        assert_eq!(lines.next(), Some("0,24GHz,0,0,true"));
        assert_eq!(lines.next(), Some("0,60GHz,0,0,true"));
        assert!(a.contains("\n131,24GHz,,,false\n"));
        assert!(a.ends_with("131,60GHz,10,11,true\n"));
    }
}
