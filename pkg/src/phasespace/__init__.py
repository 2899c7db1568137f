# ncphase - Noncommutative Oscillator Entanglement Toolkit
