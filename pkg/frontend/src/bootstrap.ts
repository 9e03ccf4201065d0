import { HttpClient, resolveBaseUrl } from "./api.js";
import { initApp } from "./main.js";

const root = document.getElementById("app");
if (root) {
  initApp(root, new HttpClient(resolveBaseUrl()));
}
