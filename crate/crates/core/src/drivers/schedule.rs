use crate::clock::NANOS_PER_SECOND;

/// Fixed-rate tick grid `anchor + round(k / rate)`.
///
/// A queued rate change is applied when the next tick fires: that tick keeps
/// its scheduled time and becomes the anchor of the new grid.
#[derive(Debug, Clone)]
pub(crate) struct Periodic {
    anchor: u64,
    index: u64,
    rate_hz: f64,
    pending_rate: Option<f64>,
}

impl Periodic {
    pub fn new(rate_hz: f64) -> Self {
        Periodic {
            anchor: 0,
            index: 0,
            rate_hz,
            pending_rate: None,
        }
    }

    pub fn start(&mut self, at: u64) {
        if let Some(r) = self.pending_rate.take() {
            self.rate_hz = r;
        }
        self.anchor = at;
        self.index = 0;
    }

    pub fn due(&self) -> u64 {
        self.anchor + offset_nanos(self.index, self.rate_hz)
    }

    pub fn queue_rate(&mut self, rate_hz: f64) {
        self.pending_rate = Some(rate_hz);
    }

    /// Fires the due tick. Returns its time and whether a queued change was
    /// applied at it.
    pub fn fire(&mut self) -> (u64, bool) {
        let t = self.due();
        let switched = if let Some(r) = self.pending_rate.take() {
            self.rate_hz = r;
            self.anchor = t;
            self.index = 0;
            true
        } else {
            false
        };
        self.index += 1;
        (t, switched)
    }
}

pub(crate) fn offset_nanos(index: u64, rate_hz: f64) -> u64 {
    (index as f64 * NANOS_PER_SECOND as f64 / rate_hz).round() as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hundred_hz_grid() {
        let mut p = Periodic::new(100.0);
        p.start(0);
        let ticks: Vec<u64> = (0..3).map(|_| p.fire().0).collect();
        assert_eq!(ticks, vec![0, 10_000_000, 20_000_000]);
    }

    #[test]
    fn rate_switch_at_next_tick() {
        let mut p = Periodic::new(100.0);
        p.start(0);
        p.fire();
        p.queue_rate(50.0);
        let (t, switched) = p.fire();
        assert_eq!((t, switched), (10_000_000, true));
        assert_eq!(p.fire().0, 30_000_000);
    }

    #[test]
    fn non_integer_period() {
        // 3 Hz: 333_333_333.3 ns, rounded per tick from the anchor
        assert_eq!(offset_nanos(1, 3.0), 333_333_333);
        assert_eq!(offset_nanos(2, 3.0), 666_666_667);
        assert_eq!(offset_nanos(3, 3.0), 1_000_000_000);
    }
}
