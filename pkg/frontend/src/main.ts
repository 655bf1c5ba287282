import { createApp } from "./app";
import { createClient } from "./api";
import "./styles.css";

const root = document.getElementById("app");
if (root) {
  createApp(root, createClient()).catch((err) => {
    root.textContent = `cannot reach the recommendation service: ${err}`;
  });
}
