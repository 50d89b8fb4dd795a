// Wire shapes of the scanner's HTTP API, transcribed from its README.

export type Protocol = "wifi" | "ble" | "zigbee";

export interface NodeDoc {
  address: string;
  protocol: Protocol;
  channels: number[];
  first_seen_us: number | null;
  last_seen_us: number | null;
  frames_total: number;
  bytes_total: number;
  /** finite ratio, or null when undefined or unbounded */
  r_sr: number | null;
  r_bf: number | null;
  m_frames_sent: number;
  c_frames_sent: number;
  d_frames_sent: number;
  m_frames_recv: number;
  c_frames_recv: number;
  d_frames_recv: number;
  m_bytes_sent: number;
  c_bytes_sent: number;
  d_bytes_sent: number;
  m_bytes_recv: number;
  c_bytes_recv: number;
  d_bytes_recv: number;
}

export type LinkPair = [string, string];

export interface WindowEcho {
  from_us: number | null;
  to_us: number | null;
}

export interface GraphDoc {
  nodes: NodeDoc[];
  links: LinkPair[];
  /** advertiser address -> network names it answered for */
  ssids: Record<string, string[]>;
  window?: WindowEcho;
}

export interface StatsDoc {
  window: WindowEcho;
  nodes: NodeDoc[];
}

export interface BandDoc {
  r_sr_min: number;
  r_sr_max: number;
  r_bf_min: number;
  r_bf_max: number;
}

export interface ScanDoc {
  protocol: Protocol;
  channels: number[];
  dwell_s: number;
  hops: number | null;
  refresh_s: number;
}

export interface ConfigDoc {
  band: BandDoc;
  scan: ScanDoc | null;
}

export interface LabeledNode extends NodeDoc {
  label: "camera" | "others";
  role: string | null;
}

export interface BleConnectionDoc {
  access_address: string;
  participants: string[];
  saw_connect_req: boolean;
  hop_increment: number | null;
  channel_map: number[] | null;
  channels: number[];
  data_frames: number;
  control_frames: number;
}

export interface ClassifyResult {
  result_id: number;
  window: { from_us: number; to_us: number; frames: number };
  band: BandDoc;
  nodes: LabeledNode[];
  cameras: string[];
  access_points: string[];
  gateway: string | null;
  links: LinkPair[];
  ssids: Record<string, string[]>;
  ble_connections: BleConnectionDoc[];
}

export interface ResultEntry {
  id: number;
  kind: string;
  created_us: number;
}

export interface HealthDoc {
  status: string;
  frames: number;
}

export interface FramesPage {
  frames: Record<string, unknown>[];
  count: number;
}
