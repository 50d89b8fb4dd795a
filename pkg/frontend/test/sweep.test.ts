import { describe, expect, it } from "vitest";
import {
  formatSweep,
  parseChannels,
  scanDocFromForm,
  sweepSeconds,
  validateScanForm,
  type ScanForm,
} from "../src/sweep";

function form(over: Partial<ScanForm> = {}): ScanForm {
  return {
    protocol: "wifi",
    channels: "1,6,11",
    dwell_s: 30,
    hops: null,
    refresh_s: 2,
    ...over,
  };
}

describe("sweep arithmetic", () => {
  it("multiplies dwell by hop count", () => {
    expect(sweepSeconds(5, 13)).toBe(65);
    expect(sweepSeconds(30, 13)).toBe(390);
  });

  it("renders the banner for the 13-channel 5s plan", () => {
    expect(formatSweep(5, 13)).toBe("65 s per sweep");
  });

  it("keeps honest fractions and trims float noise", () => {
    expect(formatSweep(2.5, 3)).toBe("7.5 s per sweep");
    expect(formatSweep(0.1, 3)).toBe("0.3 s per sweep"); // not 0.30000000000000004
  });
});

describe("channel parsing", () => {
  it("accepts spaced comma lists", () => {
    expect(parseChannels("1, 6,11")).toEqual([1, 6, 11]);
  });

  it("rejects anything non-numeric", () => {
    expect(parseChannels("1,six")).toBeNull();
    expect(parseChannels("1,-2")).toBeNull();
  });

  it("treats blanks as empty, not invalid", () => {
    expect(parseChannels("")).toEqual([]);
    expect(parseChannels(" , ")).toEqual([]);
  });
});

describe("form validation mirrors the server", () => {
  it("passes a sane form", () => {
    expect(validateScanForm(form())).toEqual([]);
    expect(validateScanForm(form({ hops: 13, dwell_s: 5 }))).toEqual([]);
  });

  it("rejects zero hops inline", () => {
    const problems = validateScanForm(form({ hops: 0 }));
    expect(problems).toHaveLength(1);
    expect(problems[0]).toMatch(/hops must be at least 1/);
  });

  it("rejects non-positive dwell and refresh", () => {
    expect(validateScanForm(form({ dwell_s: 0 }))[0]).toMatch(/dwell/);
    expect(validateScanForm(form({ dwell_s: -3 }))[0]).toMatch(/dwell/);
    expect(validateScanForm(form({ refresh_s: 0 }))[0]).toMatch(/refresh/);
  });

  it("rejects empty and repeating channel lists", () => {
    expect(validateScanForm(form({ channels: "" }))[0]).toMatch(/empty/);
    expect(validateScanForm(form({ channels: "1,6,1" }))[0]).toMatch(/repeats/);
  });

  it("rejects unknown protocols and garbage channels", () => {
    expect(validateScanForm(form({ protocol: "lorawan" }))[0]).toMatch(/protocol/);
    expect(validateScanForm(form({ channels: "1,banana" }))[0]).toMatch(/comma-separated/);
  });

  it("collects every problem at once", () => {
    const problems = validateScanForm(
      form({ protocol: "x", channels: "", dwell_s: 0, hops: 0, refresh_s: -1 }),
    );
    expect(problems).toHaveLength(5);
  });
});

describe("form to wire doc", () => {
  it("produces the server's scan shape", () => {
    expect(scanDocFromForm(form({ hops: 13, dwell_s: 5 }))).toEqual({
      protocol: "wifi",
      channels: [1, 6, 11],
      dwell_s: 5,
      hops: 13,
      refresh_s: 2,
    });
  });
});
